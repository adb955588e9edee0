# -*- coding: utf-8 -*-
import json
import math

import numpy as np
import pytest

from conftest import STAR_ALPHA
from sispatch.cli import build_parser, main, make_config
from sispatch.outputformatters import read_table

PAIR_DOCUMENT = {
    'connectivity': {'matrix': [[0, 1], [1, 0]]},
    'beta': [2, 2], 'gamma': [1, 1], 'dS': 1, 'dI': 1, 'N': 8,
}


@pytest.fixture
def write_config(tmp_path):
    def write(doc, name='scenario.json'):
        path = tmp_path / name
        path.write_text(json.dumps(doc))
        return str(path)
    return write


def test_validate_star(write_config, star_document, capsys):
    assert main(['validate', '--config', write_config(star_document)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == 'n: 4'
    alpha = [float(v) for v in lines[1].split(':')[1].split()]
    np.testing.assert_allclose(alpha, STAR_ALPHA, atol=1e-12)
    assert 'H-: {3,4}' in lines and 'H+: {1,2}' in lines
    assert all('%s: holds' % key in lines for key in ('A0', 'A1', 'A2', 'A3'))


def test_validate_flags_tie(write_config, star_document, capsys):
    star_document['gamma'][0] = star_document['beta'][0]
    assert main(['validate', '--config', write_config(star_document)]) == 0
    out = capsys.readouterr().out
    assert 'A3: fails' in out
    assert 'beta = gamma: {1}' in out


def test_validate_disconnected_graph(write_config, capsys):
    doc = dict(PAIR_DOCUMENT, connectivity={'matrix': [[0, 0], [1, 0]]})
    assert main(['validate', '--config', write_config(doc)]) == 2
    assert 'invalid input' in capsys.readouterr().err


def test_broken_json(tmp_path, capsys):
    path = tmp_path / 'broken.json'
    path.write_text('{"beta": [1, 2')
    assert main(['validate', '--config', str(path)]) == 2
    assert 'line 1' in capsys.readouterr().err


def test_bad_grid_is_a_usage_error(write_config, star_document):
    with pytest.raises(SystemExit) as info:
        main(['r0', '--config', write_config(star_document),
              '--grid', '1:2'])
    assert info.value.code == 2


def test_r0_sweep(write_config, star_document, tmp_path):
    out = tmp_path / 'r0.csv'
    code = main(['r0', '--config', write_config(star_document),
                 '--grid', '0.1:10:3:geometric', '--out', str(out)])
    assert code == 0
    text = out.read_text()
    assert text.startswith('# tool: sispatch/')
    frame = read_table(str(out))
    assert list(frame.columns) == ['dI', 'R0', 's_F_minus_V']
    assert len(frame) == 5
    swept = frame['R0'].tolist()[:3]
    assert swept[0] > swept[1] > 1.0 > swept[2]
    assert frame['dI'].tolist()[3:] == [0.0, math.inf]
    assert frame['R0'].tolist()[3] == pytest.approx(4.0)
    assert frame['R0'].tolist()[4] == pytest.approx(4.0 / 9.0)


def test_r0_output_is_deterministic(write_config, star_document, tmp_path):
    config = write_config(star_document)
    first, second = tmp_path / 'a.csv', tmp_path / 'b.csv'
    for path, threads in ((first, '1'), (second, '3')):
        main(['r0', '--config', config, '--grid', '0.5:50:4',
              '--threads', threads, '--out', str(path)])
    assert first.read_text() == second.read_text()


def test_profile_sweep(write_config, star_document, tmp_path):
    out = tmp_path / 'profile.csv'
    code = main(['profile', '--config', write_config(star_document),
                 '--grid', '0.1:2:2:linear', '--out', str(out)])
    assert code == 0
    frame = read_table(str(out))
    np.testing.assert_allclose(frame['h_2'], 3.0 / 7.0, atol=1e-12)
    assert frame['h_1'][0] > 0 > frame['h_1'][1]
    assert frame['J_plus'].tolist() == ['{1,2}', '{2}']
    assert frame['method'].tolist() == ['analytic', 'numeric']
    assert frame['status'].tolist() == ['ok', 'ok']
    S_star = frame[['S_star_%d' % j for j in range(1, 5)]].to_numpy()
    np.testing.assert_allclose(S_star.sum(axis=1), 100.0, atol=1e-9)
    assert S_star[0, 0] == 0.0 and S_star[1, 0] > 0.1


def test_profile_beyond_threshold(write_config, star_document, tmp_path):
    out = tmp_path / 'profile.csv'
    main(['profile', '--config', write_config(star_document),
          '--grid', '20:20:1', '--out', str(out)])
    frame = read_table(str(out))
    assert frame['status'].tolist() == ['subthreshold']
    assert math.isnan(frame['S_star_1'][0])


def test_equilibrium_uniform_pair(write_config, capsys):
    assert main(['equilibrium', '--config', write_config(PAIR_DOCUMENT)]) == 0
    lines = [line for line in capsys.readouterr().out.splitlines()
             if not line.startswith('#')]
    header, row = lines[0].split(','), [float(v) for v in lines[1].split(',')]
    values = dict(zip(header, row))
    for key in ('S_1', 'S_2', 'I_1', 'I_2'):
        assert values[key] == pytest.approx(2.0, abs=1e-9)
    assert values['total'] == pytest.approx(8.0, abs=1e-9)


def test_equilibrium_below_threshold(write_config, star_document, capsys):
    star_document['dI'] = 20
    code = main(['equilibrium', '--config', write_config(star_document)])
    assert code == 4
    err = capsys.readouterr().err
    assert 'no endemic equilibrium' in err
    r0 = float(err.split('R0 = ')[1].split()[0])
    assert r0 < 1.0


def test_simulate_pair(write_config, tmp_path, capsys):
    out = tmp_path / 'trajectory.csv'
    code = main(['simulate', '--config', write_config(PAIR_DOCUMENT),
                 '--t-end', '5', '--stride', '1', '--initial',
                 'dfe-perturbed', '--out', str(out)])
    assert code == 0
    frame = read_table(str(out))
    assert frame['t'].tolist() == [0.0, 1.0, 2.0, 3.0, 4.0, 5.0]
    np.testing.assert_allclose(frame['total'], 8.0, atol=1e-9)
    assert 'at t = 5' in capsys.readouterr().err


def test_star_example_bundle(tmp_path, capsys):
    out = tmp_path / 'bundle'
    assert main(['star-example', '--out', str(out)]) == 0
    for name in ('alpha', 'r0', 'profile', 'thresholds', 'classification',
                 'equilibrium'):
        assert (out / ('%s.csv' % name)).exists()
    assert (out / 'report.txt').exists()

    alpha = read_table(str(out / 'alpha.csv'))
    np.testing.assert_allclose(alpha['alpha'], STAR_ALPHA, atol=1e-12)
    thresholds = read_table(str(out / 'thresholds.csv'))
    assert abs(thresholds['dI_star'][0] - 4.8954) < 1e-3
    assert thresholds['regime'][0] == 'ii2'
    classification = read_table(str(out / 'classification.csv'))
    assert classification['J_plus'].tolist() == ['{1,2}', '{2}']
    equilibrium = read_table(str(out / 'equilibrium.csv'))
    assert equilibrium['total'][0] == pytest.approx(100.0, abs=1e-9)
    assert 'regime: ii2' in capsys.readouterr().out


def test_equilibrium_dS_grid(write_config, tmp_path):
    out = tmp_path / 'equilibrium.csv'
    code = main(['equilibrium', '--config', write_config(PAIR_DOCUMENT),
                 '--grid', '0.5:2:3:linear', '--out', str(out)])
    assert code == 0
    frame = read_table(str(out))
    assert frame['dS'].tolist() == [0.5, 1.25, 2.0]
    # uniform rates give S = I = 2 on both patches whatever the movement
    for key in ('S_1', 'S_2', 'I_1', 'I_2'):
        np.testing.assert_allclose(frame[key], 2.0, atol=1e-9)
    np.testing.assert_allclose(frame['total'], 8.0, atol=1e-9)


def test_equilibrium_dS_sweep_block(write_config, star_document, tmp_path):
    star_document['sweep'] = {'parameter': 'dS', 'grid': 'geometric',
                              'from': 0.01, 'to': 1, 'points': 3}
    out = tmp_path / 'equilibrium.csv'
    assert main(['equilibrium', '--config', write_config(star_document),
                 '--out', str(out)]) == 0
    frame = read_table(str(out))
    np.testing.assert_allclose(frame['dS'], [0.01, 0.1, 1.0])
    np.testing.assert_allclose(frame['total'], 100.0, atol=1e-9)
    assert np.all(frame['residual'] <= 1e-9)
    # patch 2 is in J+ at d_I = 1, its susceptibles vanish as d_S -> 0
    assert frame['S_2'][0] < frame['S_2'][2]


def test_equilibrium_hash_ignores_number_spelling(write_config, tmp_path):
    spelled = dict(PAIR_DOCUMENT, beta=[2.0, 2.0], gamma=[1.0, 1.0],
                   dS=1.0, dI=1.0, N=8.0)
    first, second = tmp_path / 'a.csv', tmp_path / 'b.csv'
    main(['equilibrium', '--config', write_config(PAIR_DOCUMENT, 'a.json'),
          '--out', str(first)])
    main(['equilibrium', '--config', write_config(spelled, 'b.json'),
          '--out', str(second)])
    assert first.read_text() == second.read_text()


def test_verbose_flag_reaches_configuration(write_config, star_document):
    path = write_config(star_document)
    args = build_parser().parse_args(['r0', '--config', path, '--verbose'])
    assert make_config(args).verbose is True
    args = build_parser().parse_args(['r0', '--config', path])
    assert make_config(args).verbose is False
