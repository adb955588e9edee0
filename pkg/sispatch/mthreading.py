# -*- coding: utf-8 -*-
"""
Anything that has to do with threading in this library
must be abstracted in this file. Parameter sweeps fan their grid
points out over a small pool of worker threads.
"""
__title__ = 'sispatch'
__license__ = 'MIT'

import logging
import queue
from threading import Thread

from .configuration import Configuration

log = logging.getLogger(__name__)


class Worker(Thread):
    """
    Thread executing tasks from a given tasks queue.
    """
    def __init__(self, tasks, timeout_seconds):
        Thread.__init__(self)
        self.tasks = tasks
        self.timeout = timeout_seconds
        self.daemon = True
        self.start()

    def run(self):
        while True:
            try:
                func, args, kargs = self.tasks.get(timeout=self.timeout)
            except queue.Empty:
                # Extra thread allocated, no job, exit gracefully
                break
            try:
                func(*args, **kargs)
            except Exception:
                log.exception('sweep task crashed')

            self.tasks.task_done()


class ThreadPool:
    def __init__(self, num_threads, timeout_seconds):
        self.tasks = queue.Queue(num_threads)
        for _ in range(num_threads):
            Worker(self.tasks, timeout_seconds)

    def add_task(self, func, *args, **kargs):
        self.tasks.put((func, args, kargs))

    def wait_completion(self):
        self.tasks.join()


class SweepPool(object):

    def __init__(self, config=None):
        """
        Abstraction of a threadpool for grid sweeps. Every grid point is
        an independent task; results come back in grid order no matter
        which thread finished first.

        >>> pool = SweepPool()
        >>> pool.map(lambda dI: dI * 2, [1.0, 2.0, 3.0])
        [2.0, 4.0, 6.0]
        """
        self.config = config or Configuration()

    def map(self, func, items, return_exceptions=False):
        """
        Calls func(item) for every item. An exception raised by a task is
        captured at its index; with `return_exceptions` it takes the place
        of the result, otherwise the lowest indexed one is re-raised once
        all tasks have finished.
        """
        items = list(items)
        results = [None] * len(items)
        failed = {}

        def run(index, item):
            try:
                results[index] = func(item)
            except Exception as e:
                failed[index] = e

        num_threads = min(max(1, int(self.config.number_threads)),
                          max(1, len(items)))
        if num_threads == 1:
            for index, item in enumerate(items):
                run(index, item)
        else:
            pool = ThreadPool(num_threads, self.config.thread_timeout_seconds)
            for index, item in enumerate(items):
                pool.add_task(run, index, item)
            pool.wait_completion()

        if failed:
            log.debug('%d of %d sweep tasks failed', len(failed), len(items))
            if not return_exceptions:
                raise failed[min(failed)]
            for index, error in failed.items():
                results[index] = error
        return results
