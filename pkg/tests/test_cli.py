import json

import pytest

from app.cli import main

EXAMPLE = 'n 6; 1,2 < 3 < 4,5,6'
HEIGHT_THREE = 'n 7; 1,2 < 3 < 5 < 6,7; 2 < 4 < 7'


def test_index_nilpotent(capsys):
    assert main(['index', EXAMPLE]) == 0
    out = capsys.readouterr().out
    assert 'formula (height-two): 7' in out
    assert 'oracle (dim 11 - rank 4): 7' in out
    assert 'verdict: AGREE' in out
    assert 'method: randomized (trials=3, seed=0)' in out


def test_index_solvable_json(capsys):
    assert main(['index', EXAMPLE, '--variant', 'solvable', '--format', 'json', '--seed', '4']) == 0
    data = json.loads(capsys.readouterr().out)
    assert data['formula']['index'] == 3
    assert data['oracle'] == 3
    assert data['seed'] == 4
    assert data['rank']['method'] == 'randomized'
    assert data['verdict'] == 'AGREE'


def test_index_solvable_on_tall_poset_reports_oracle_only(capsys):
    assert main(['index', HEIGHT_THREE, '--variant', 'solvable']) == 0
    out = capsys.readouterr().out
    assert 'formula: not available' in out
    assert 'verdict: ORACLE-ONLY' in out


def test_index_exact_method(capsys):
    assert main(['index', HEIGHT_THREE, '--method', 'exact']) == 0
    out = capsys.readouterr().out
    assert 'formula (general): 5' in out
    assert 'method: exact' in out


def test_parse_error_exit_code(capsys):
    assert main(['index', 'n 3; 1 < 5']) == 2
    err = capsys.readouterr().err
    assert err.startswith('error: line 2:')


def test_missing_file_is_an_input_error(capsys, tmp_path):
    assert main(['rank', '--matrix', str(tmp_path / 'missing.json')]) == 2
    assert 'error:' in capsys.readouterr().err


def test_hasse_of_antichain(capsys):
    assert main(['hasse', 'n 3']) == 0
    out = capsys.readouterr().out
    assert '  1 [label="1"];' in out
    assert '  3 [label="3"];' in out
    assert '->' not in out


def test_hasse_from_file(capsys, tmp_path):
    path = tmp_path / 'chain.poset'
    path.write_text('n 3\n1 < 2 < 3\n')
    assert main(['hasse', str(path)]) == 0
    out = capsys.readouterr().out
    assert '  1 -> 2;' in out
    assert '  1 -> 3;' not in out


def test_matrix_json_feeds_rank(capsys, tmp_path):
    assert main(['matrix', EXAMPLE, '--format', 'json']) == 0
    path = tmp_path / 'matrix.json'
    path.write_text(capsys.readouterr().out)

    assert main(['rank', '--matrix', str(path), '--format', 'json']) == 0
    from_file = json.loads(capsys.readouterr().out)
    assert main(['rank', EXAMPLE, '--format', 'json']) == 0
    direct = json.loads(capsys.readouterr().out)
    assert from_file == direct
    assert direct['rank'] == 4


def test_matrix_text_block_ordering(capsys):
    assert main(['matrix', EXAMPLE, '--ordering', 'block', '--nonzero']) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[1].split() == ['E_{1,3}', 'E_{1,4}', 'E_{1,5}', 'E_{1,6}', '0', '0']


def test_reduce_text_and_verify(capsys):
    assert main(['reduce', HEIGHT_THREE, '--verify']) == 0
    out = capsys.readouterr().out
    assert 'case 1 at 5' in out
    assert '5_3=5' in out
    assert 'rank 10 -> 10, checks PASS' in out
    assert 'final: n=9, height=2' in out


def test_reduce_dot(capsys):
    assert main(['reduce', HEIGHT_THREE, '--format', 'dot']) == 0
    out = capsys.readouterr().out
    assert 'digraph before {' in out
    assert 'digraph after {' in out


def test_reduce_json(capsys):
    assert main(['reduce', HEIGHT_THREE, '--format', 'json', '--verify', '--seed', '3']) == 0
    data = json.loads(capsys.readouterr().out)
    assert data['seed'] == 3
    assert data['checks'][0]['passed'] is True
    assert data['steps'][0]['new_elements'] == {'5_3': 5, "5'": 7}


def test_sweep_writes_report(capsys, tmp_path):
    path = tmp_path / 'report.json'
    assert main(['sweep', '--n', '3', '--output', str(path)]) == 0
    assert 'PASS' in capsys.readouterr().out
    report = json.loads(path.read_text())
    assert report['poset_count'] == 7
    assert report['passed'] is True
    assert 'elapsed' not in report


def test_sweep_is_byte_identical(capsys):
    main(['sweep', '--n', '4', '--format', 'json', '--seed', '5'])
    first = capsys.readouterr().out
    main(['sweep', '--n', '4', '--format', 'json', '--seed', '5'])
    assert capsys.readouterr().out == first


def test_sweep_rejects_unknown_checks(capsys):
    assert main(['sweep', '--n', '3', '--checks', 'nilpotent_formula,bogus']) == 2
    assert 'bogus' in capsys.readouterr().err


def test_sweep_resource_bound(capsys):
    assert main(['sweep', '--n', '9']) == 2


def test_sweep_sample(capsys):
    assert main(['sweep', '--sample', '10', '--max-size', '5', '--format', 'json']) == 0
    assert json.loads(capsys.readouterr().out)['poset_count'] == 10


def test_subcommand_required():
    with pytest.raises(SystemExit):
        main([])


def test_negative_seed_is_accepted(capsys):
    assert main(['rank', 'n 3; 1 < 2 < 3', '--seed', '-1', '--format', 'json']) == 0
    data = json.loads(capsys.readouterr().out)
    assert data['seed'] == -1
    assert data['rank'] == 2
    assert main(['sweep', '--n', '2', '--seed', '-5']) == 0


@pytest.mark.parametrize('argv', [
    ['index', EXAMPLE, '--trials', '0'],
    ['rank', EXAMPLE, '--trials', '-2'],
    ['sweep', '--sample', '0'],
    ['sweep', '--n', '3', '--workers', 'two'],
])
def test_bad_counts_exit_with_input_error(argv, capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(argv)
    assert excinfo.value.code == 2
    assert 'argument --' in capsys.readouterr().err


def test_index_reports_frobenius(capsys):
    assert main(['index', 'n 2; 1 < 2', '--variant', 'solvable']) == 0
    assert 'frobenius: no' in capsys.readouterr().out
    assert main(['index', EXAMPLE, '--format', 'json']) == 0
    assert json.loads(capsys.readouterr().out)['frobenius'] is False


def test_reduce_writes_final_poset(capsys, tmp_path):
    path = tmp_path / 'final.poset'
    assert main(['reduce', HEIGHT_THREE, '--final', str(path)]) == 0
    capsys.readouterr()
    text = path.read_text()
    assert text.startswith('n 9\n')
    assert "name 7 5'" in text
    assert main(['index', str(path)]) == 0
    out = capsys.readouterr().out
    assert 'height=2' in out
    assert 'formula (height-two): 10' in out
