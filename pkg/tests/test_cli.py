import json

import pytest

import vatican
from conftest import VATICAN_PAIR_DESIGN, as_csv


@pytest.fixture(autouse=True)
def no_budget_override(monkeypatch):
    monkeypatch.delenv("VATICAN_NODE_BUDGET", raising=False)


def run(capsys, *argv):
    code = vatican.main(list(argv) + ["--workers", "1"])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_construct_walecki(capsys):
    code, out, err = run(capsys, "construct", "--method", "walecki", "--t", "6")
    assert code == vatican.EXIT_OK
    assert out == "(0,5,1,4,2,3)\nk = 1\n"
    assert "terrace" in err


def test_construct_walecki_design(capsys):
    code, out, _ = run(capsys, "construct", "--method", "walecki", "--t", "6", "--design")
    assert code == 0
    assert out.splitlines()[1] == "1,0,2,5,3,4"


def test_construct_primitive_root(capsys):
    code, out, _ = run(capsys, "construct", "--method", "primitive-root", "--p", "11", "--rho", "8")
    assert code == 0
    assert out == "(0,8,9,6,4,10,3,2,5,7,1)\n*(5,10,8,9)\n"


def test_construct_primitive_root_design_keeps_certificate(capsys):
    code, out, _ = run(capsys, "construct", "--method", "primitive-root", "--p", "11", "--rho", "8",
                       "--design")
    assert code == 0
    assert out == "(0,8,9,6,4,10,3,2,5,7,1)\n*(5,10,8,9)\n"


def test_construct_primitive_root_expanded(capsys):
    code, out, err = run(capsys, "construct", "--method", "primitive-root", "--p", "11", "--rho", "8",
                         "--expand")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 55
    assert all(len(line.split(",")) == 11 for line in lines)
    assert lines[0] == "0,8,9,6,4,10,3,2,5,7,1"
    assert "Vatican" in err


def test_construct_primitive_root_json(capsys):
    code, out, _ = run(capsys, "construct", "--method", "primitive-root", "--p", "11", "--rho", "8",
                       "--format", "json")
    payload = json.loads(out)
    assert payload['certificate']['r'] == 9
    assert payload['k'] == 10


def test_construct_halving(capsys):
    code, out, _ = run(capsys, "construct", "--method", "primitive-root", "--p", "5", "--halving")
    assert code == 0
    assert out.splitlines()[-1] == "*(2,4,3,4)"

    code, out, err = run(capsys, "construct", "--method", "primitive-root", "--p", "7", "--halving")
    assert code == vatican.EXIT_NOT_MET
    assert out == ""


def test_construct_prescott(capsys):
    code, out, _ = run(capsys, "construct", "--method", "prescott", "--t", "5")
    assert code == 0
    assert out.splitlines()[:3] == ["(0,1,3,4,2)", "(0,2,4,3,1)", "(0,4,3,1,2)"]


def test_construct_stacked(capsys):
    code, out, err = run(capsys, "construct", "--method", "stacked", "--t", "5", "--ell", "2")
    assert code == 0
    assert len(out.splitlines()) == 10
    assert "Vatican" in err


@pytest.mark.parametrize("argv", [
    ["construct", "--method", "walecki"],
    ["construct", "--method", "primitive-root", "--p", "11"],
    ["construct", "--method", "primitive-root", "--p", "11", "--rho", "8", "--halving"],
    ["construct", "--method", "walecki", "--t", "6", "--rho", "3"],
    ["construct", "--method", "stacked", "--t", "5"],
    ["construct", "--method", "walecki", "--t", "0"],
    ["tables", "7"],
    ["search", "--group", "Z7"],
])
def test_usage_errors(argv):
    with pytest.raises(SystemExit) as excinfo:
        vatican.main(argv)
    assert excinfo.value.code == vatican.EXIT_USAGE


def test_domain_errors_exit_2(capsys):
    assert run(capsys, "construct", "--method", "primitive-root", "--p", "12", "--rho", "5")[0] == 2
    assert run(capsys, "construct", "--method", "prescott", "--t", "6")[0] == 2
    assert run(capsys, "expand", "--group", "S3", "--aut", "1->2", "--arrangement", "0,1,2")[0] == 2
    assert run(capsys, "expand", "--group", "Z5", "--aut", "1->4", "--arrangement", "0,1,1,2,3")[0] == 2


def test_expand_reproduces_vatican_pair(capsys):
    code, out, err = run(capsys, "expand", "--group", "Z5", "--aut", "1->4", "--arrangement", "0,1,3,4,2")
    assert code == 0
    assert out == as_csv(VATICAN_PAIR_DESIGN)
    assert "k = 4" in err


def test_verify(capsys, vatican_pair_csv, roman_square_csv):
    code, out, _ = run(capsys, "verify", str(vatican_pair_csv), "--require-vatican")
    assert code == 0
    report = json.loads(out)
    assert report['vatican'] is True
    assert report['maxima'][0] == 2
    assert max(report['maxima']) <= 2

    code, out, _ = run(capsys, "verify", str(roman_square_csv), "--require-k", "2")
    assert code == vatican.EXIT_NOT_MET
    assert json.loads(out)['max_k'] == 1

    code, out, _ = run(capsys, "verify", str(roman_square_csv), "--format", "paper")
    assert code == 0
    assert "max k = 1" in out


def test_verify_bad_inputs(capsys, tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    assert run(capsys, "verify", str(empty))[0] == vatican.EXIT_USAGE

    lopsided = tmp_path / "lopsided.csv"
    lopsided.write_text("0,1,2\n0,2,1\n0,1,2\n")
    assert run(capsys, "verify", str(lopsided))[0] == vatican.EXIT_NOT_MET

    assert run(capsys, "verify", str(tmp_path / "missing.csv"))[0] == vatican.EXIT_USAGE


def test_sweep_paper_format(capsys):
    code, out, _ = run(capsys, "sweep", "--p-max", "13", "--paper-format")
    assert code == 0
    assert out.splitlines() == [
        "5: *(2,4,3,4)",
        "7: (2) (3)",
        "11: (2,1,6,10) *(5,10,8,9)",
        "13: (2,1,7,12) (3,1,6,9) (4,1,11,5) (6)",
    ]


def test_sweep_listing_and_json(capsys):
    code, out, _ = run(capsys, "sweep", "--p-max", "13", "--k-min", "2", "--paper-format")
    assert out == "*(5; 2, 4, 3, 4)\n*(11; 5, 10, 8, 9)\n"

    code, out, _ = run(capsys, "sweep", "--p-max", "13")
    assert json.loads(out.splitlines()[0]) == {'p': 5, 'ell': 2, 'best_k': 4, 'rho': 3, 'r': 4}
    assert json.loads(out.splitlines()[1]) == {'p': 7, 'ell': 2, 'best_k': None}

    assert run(capsys, "sweep", "--p-max", "20000")[0] == vatican.EXIT_USAGE


def test_search_exit_codes(capsys):
    code, out, _ = run(capsys, "search", "--group", "Z7", "--ell", "3", "--aut", "1->2")
    assert code == vatican.EXIT_OK
    assert out.startswith("1->2: (0,")

    code, _, err = run(capsys, "search", "--group", "Z3xZ3", "--ell", "2")
    assert code == vatican.EXIT_NOT_MET
    assert "None exists" in err

    code, _, err = run(capsys, "search", "--group", "Z17", "--ell", "2", "--node-budget", "1000")
    assert code == vatican.EXIT_BUDGET
    assert "NOT established" in err


def test_search_budget_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("VATICAN_NODE_BUDGET", "1000")
    code, _, _ = run(capsys, "search", "--group", "Z17", "--ell", "2")
    assert code == vatican.EXIT_BUDGET


def test_search_json_and_tuples(capsys):
    code, out, _ = run(capsys, "search", "--group", "Z5", "--ell", "2", "--mode", "tuple",
                       "--fixed", "0,1,3,4,2", "--max-witnesses", "0", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload['status'] == 'complete'
    assert ["0,1,3,4,2", "0,4,2,1,3"] in [w['members'] for w in payload['witnesses']]


def test_tables_with_exports(capsys, tmp_path):
    html_path = tmp_path / "tables.html"
    xlsx_path = tmp_path / "tables.xlsx"
    code, out, _ = run(capsys, "tables", "5", "--html", str(html_path), "--xlsx", str(xlsx_path))
    assert code == 0
    assert out.count("PASS [5]") == 3
    assert html_path.exists()
    assert xlsx_path.exists()


def test_tables_json(capsys):
    code, out, _ = run(capsys, "tables", "3", "--format", "json")
    assert code == 0
    report = json.loads(out)
    assert report['summary']['total_fail'] == 0
    assert report['summary']['total_informational'] == 1
