import json
import os

import pytest

from evoseries.cli import EXIT_ERROR, EXIT_INCONCLUSIVE, EXIT_NUMERIC, EXIT_OK, EXIT_VIOLATED, main

from conftest import problem_path

HEAT_WITH_OFFSET = """[problem]
kind = PDE
fields = u

[equations]
dt(u) = dxx(u)

[initial]
u = exp(x) + 0.000000001

[claim.exact]
u = exp(x + t)
"""


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_verify_satisfied(capsys):
    code, out = run(capsys, 'verify', problem_path('heat'), '--claim', 'exact')
    assert code == EXIT_OK
    assert out.splitlines()[0] == "claim exact of heat (PDE): Satisfied"


def test_verify_violated(capsys):
    code, out = run(capsys, 'verify', problem_path('reaction_diffusion'), '--claim', 'exact_wave_xt', '--json')
    assert code == EXIT_VIOLATED
    doc = json.loads(out)
    assert doc['status'] == 'Violated'
    assert doc['claim'] == 'exact_wave_xt'


def test_verify_inconclusive(capsys, write_problem):
    path = write_problem(HEAT_WITH_OFFSET, 'offset')
    code, out = run(capsys, 'verify', path, '--claim', 'exact', '--json')
    assert code == EXIT_INCONCLUSIVE
    doc = json.loads(out)
    assert doc['equations'][0]['verdict'] == 'ProvenZero'
    assert doc['ic'][0]['verdict'] == 'Unknown'


def test_compare_blow_up(capsys, write_problem):
    path = write_problem("[problem]\nkind = PDE\nfields = u\n[equations]\ndt(u) = u^2\n[initial]\nu = 10\n")
    code, out = run(capsys, 'compare', path, '--t-max', '1')
    assert code == EXIT_NUMERIC
    assert out == ""


@pytest.mark.parametrize('argv', [
    ['verify', problem_path('missing'), '--claim', 'exact'],
    ['verify', problem_path('heat')],
    ['verify', problem_path('heat'), '--claim', 'nope'],
    ['solve', problem_path('heat'), '--param', 'k=1'],
    ['solve', problem_path('heat'), '--order', '-1'],
    ['compare', problem_path('heat'), '--tol', '0'],
    ['solve', problem_path('heat'), '--precision', '5'],
    ['integrate', problem_path('heat')],
    ['solve', problem_path('heat'), '--bogus'],
])
def test_errors_exit_one(capsys, argv):
    code, out = run(capsys, *argv)
    assert code == EXIT_ERROR
    assert out == ""


def test_syntax_error_exits_one(capsys, write_problem):
    path = write_problem("[problem]\nkind = PDE\nfields = u\n[equations]\ndt(u) = u\n[initial]\nu = exp(\n")
    assert main(["solve", path]) == EXIT_ERROR
    captured = capsys.readouterr()
    assert captured.out == ""
    assert "line 7, column 8" in captured.err


def test_solve_json(capsys):
    code, out = run(capsys, 'solve', problem_path('reaction_diffusion'), '--order', '3', '--json')
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc['order'] == 3
    assert doc['params'] == {}
    for f in ('u', 'v'):
        assert len(doc['series'][f]['coefficients']) == 4
        assert doc['defect'][f] == ['ProvenZero'] * 3
    assert not doc['residual_order']['exact']


def test_solve_order_zero(capsys):
    code, out = run(capsys, 'solve', problem_path('heat'), '--order', '0', '--json')
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc['series']['u']['coefficients'] == ['exp(x)']
    assert doc['defect']['u'] == []


def test_solve_text(capsys):
    code, out = run(capsys, 'solve', problem_path('linear_lattice'), '--order', '2')
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "linear_lattice (DDE), order 2"
    assert "  u[0] = n" in lines
    assert "  u[1] = 2" in lines


def test_stdout_is_deterministic(capsys):
    argv = ['verify', problem_path('reaction_diffusion'), '--claim', 'source_wave', '--json']
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second


def test_verify_scan(capsys):
    code, out = run(capsys, 'verify', problem_path('reaction_diffusion'), '--claim', 'source_wave',
                    '--scan', 'k=-2..2:9', '--json')
    assert code == EXIT_VIOLATED
    scan = json.loads(out)['scan']
    assert scan['symbol'] == 'k'
    assert len(scan['rows']) == 9
    assert scan['near_zero']['ic_max_v'] == ['-1']


def test_compare_writes_reference_files(capsys, tmp_path):
    out_folder = str(tmp_path / 'results')
    code, out = run(capsys, 'compare', problem_path('heat'), '--order', '3', '--t-max', '0.05', '--tol', 'inf',
                    '--out', out_folder, '--json')
    assert code == EXIT_OK
    doc = json.loads(out)
    assert float(doc['window']['t_star']) == pytest.approx(0.05)
    folder = os.path.join(out_folder, 'heat', 'compare')
    for name in ('report.json', 'report.txt', 'reference.csv', 'reference.json'):
        assert os.path.isfile(os.path.join(folder, name))
    with open(os.path.join(folder, 'report.json')) as f:
        assert json.load(f) == doc


def test_report_covers_every_claim(capsys):
    code, out = run(capsys, 'report', problem_path('linear_lattice'), '--order', '1', '--json')
    assert code == EXIT_OK
    doc = json.loads(out)
    assert set(doc['claims']) == {'drift', 'frozen'}
    assert doc['claims']['drift']['status'] == 'Satisfied'
    assert doc['claims']['frozen']['status'] == 'Violated'
    assert 'first_term' in doc['claims']['drift']


def test_version(capsys):
    with pytest.raises(SystemExit) as info:
        main(['--version'])
    assert info.value.code == 0
    assert capsys.readouterr().out.startswith("evoseries ")
