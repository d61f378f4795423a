import json

import pytest

from amrenorm import io
from amrenorm.cli import main
from amrenorm.model import atoms


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_single_point(capsys):
    code, out, _ = run(capsys, "gen", "--levels", "1", "--cells", "1", "--seed", "1")
    s = io.structure_from_json(json.loads(out))
    assert code == 0 and len(s.points) == 1


def test_gen_valid_and_deterministic(capsys):
    _, a, _ = run(capsys, "gen", "--levels", "2", "--seed", "7")
    _, b, _ = run(capsys, "gen", "--levels", "2", "--seed", "7")
    assert a == b
    io.structure_from_json(json.loads(a))


def test_gen_perfect_fraction(capsys, tmp_path):
    path = tmp_path / "s.json"
    run(capsys, "gen", "--perfect-fraction", "1", "--seed", "3", "-o", str(path))
    s = io.structure_from_json(io.load(str(path)))
    assert atoms(s) == []
    code, out, _ = run(capsys, "renorm", str(path))
    assert json.loads(out)["kind"] == "weighted_sup"


def test_gen_bad_parameters(capsys):
    code, _, err = run(capsys, "gen", "--link-density", "2")
    assert code == 4 and "error" in err


def test_verify_renorm_s0(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "renorm", "--fixture", "s0")
    rep = json.loads(out)
    assert code == 0 and rep["totals"]["failed"] == 0


def test_verify_isometry_weighted_sup(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "isometry", "--fixture", "s0",
                       "--norm", "weighted-sup")
    rep = json.loads(out)
    check = next(c for c in rep["checks"] if c["id"] == "expected-nontrivial")
    assert code == 0 and check["status"] == "pass" and check["witness"]["size"] == 2


def test_verify_degenerate(capsys, tmp_path):
    path = tmp_path / "empty.json"
    path.write_text('{"C": "3/2", "levels": [], "links": []}')
    code, _, err = run(capsys, "verify", "--suite", "all", "--input", str(path))
    assert code == 4 and "degenerate" in err


def test_verify_deterministic(capsys):
    _, a, _ = run(capsys, "verify", "--suite", "all", "--seed", "5")
    _, b, _ = run(capsys, "verify", "--suite", "all", "--seed", "5")
    assert a == b


@pytest.mark.parametrize("suite", ["model", "extension", "transform", "dual"])
def test_verify_suites_pass(capsys, suite):
    code, out, _ = run(capsys, "verify", "--suite", suite, "--seed", "2")
    assert code == 0 and json.loads(out)["totals"]["failed"] == 0


def test_isometries_exit_codes(capsys, tmp_path):
    code, out, _ = run(capsys, "isometries", "--fixture", "s0")
    assert code == 0 and len(json.loads(out)) == 1
    code, out, _ = run(capsys, "isometries", "--fixture", "s0", "--norm", "weighted-sup")
    assert code == 2 and len(json.loads(out)) == 2
    norm = tmp_path / "n.json"
    run(capsys, "renorm", "--fixture", "s0", "--norm", "weighted-sup", "-o", str(norm))
    code, _, _ = run(capsys, "isometries", "--norm-file", str(norm))
    assert code == 2


def test_isometries_search_bound(capsys, tmp_path):
    path = tmp_path / "s.json"
    run(capsys, "gen", "--levels", "1", "--cells", "6", "-o", str(path))
    code, _, err = run(capsys, "isometries", str(path), "--max-points", "3")
    assert code == 4 and "bound" in err


def test_dual_command(capsys, tmp_path):
    f = tmp_path / "f.json"
    f.write_text('{"coords": {"r": "1"}}')
    code, out, _ = run(capsys, "dual", "--fixture", "s0", str(f), "--c", "11/10")
    res = json.loads(out)
    assert code == 0
    assert res["reduced"]["coords"]["q"] == "2/3"
    assert res["base_dual_norm"] == "2/3"
    assert res["renorm_dual_norm"] == "80/123"


def test_transform_and_report(capsys, tmp_path):
    m = tmp_path / "m.json"
    m.write_text(json.dumps({"H": ["a", "b"], "generators": [{"a": "1", "b": "1/2"}]}))
    rep = tmp_path / "r.json"
    code, out, _ = run(capsys, "transform", str(m), "--report", str(rep))
    assert code == 0
    io.structure_from_json(json.loads(out))
    ratios = io.load(str(rep))["ratios"]
    assert len(ratios) == 1
    code, out, _ = run(capsys, "report", str(m))
    res = json.loads(out)
    assert code == 0 and "same_size" in res


def test_bad_rational_flag(capsys):
    with pytest.raises(SystemExit):
        main(["gen", "--C", "abc"])
    code, _, err = run(capsys, "gen", "--C", "1/2")
    assert code == 4 and "1 < C < 2" in err


def test_invalid_constants(capsys):
    code, _, err = run(capsys, "renorm", "--fixture", "s0", "--c", "6/5")
    assert code == 4 and "c^3" in err


def test_missing_file(capsys):
    code, _, _ = run(capsys, "renorm", "/nonexistent.json")
    assert code == 4
