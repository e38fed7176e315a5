"""Command-line surface, exercised in process through main()."""
import json

import pytest

from radcount import __version__
from radcount.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as e:
        main(["--version"])
    assert e.value.code == 0
    assert __version__ in capsys.readouterr().out


def test_report_wrapper_and_config(capsys):
    code, doc = run_json(capsys, "potential", "show", "--spec",
                         "square-well")
    assert code == 0
    assert set(doc) == {"tool", "version", "config", "report"}
    assert doc["tool"] == "radcount"
    assert doc["version"] == __version__
    cfg = doc["config"]
    assert cfg["subcommand"] == "potential"
    assert cfg["spec"] == "square-well"
    assert cfg["quad_abs_tol"] == 1e-10
    assert cfg["seed"] == 1234
    assert doc["report"]["kind"] == "square-well"


def test_potential_integrals_disk(capsys):
    code, doc = run_json(capsys, "potential", "integrals", "--spec",
                         "square-well")
    assert code == 0
    rep = doc["report"]
    assert rep["J"]["value"] == pytest.approx(0.5, rel=1e-9)
    assert rep["logweight"]["value"] == pytest.approx(0.25, rel=1e-8)
    assert rep["weyl_coefficient"] == pytest.approx(0.25, rel=1e-9)


def test_bundled_name_matching_is_forgiving(capsys):
    # punctuation and case in the spec name are ignored for bundled lookup
    for alias in ("SquareWell.json", "SQUARE_WELL", "square well"):
        code, doc = run_json(capsys, "potential", "show", "--spec", alias)
        assert code == 0
        assert doc["report"]["kind"] == "square-well"


def test_seq_verdict_slow_tail(capsys):
    code, doc = run_json(capsys, "seq", "--spec", "counterexample")
    assert code == 0
    rep = doc["report"]
    assert rep["K"] == 200
    assert len(rep["zeta"]) == 201
    v = rep["verdict"]
    assert v["linear_growth"] == "yes"
    assert v["weyl_law"] == "no"
    assert v["text"] == "O(alpha) holds, Weyl fails"
    assert 0.97 <= v["sup_ratio"] <= 1.05


def test_seq_verdict_disk(capsys):
    code, doc = run_json(capsys, "seq", "--spec", "square-well")
    v = doc["report"]["verdict"]
    assert (v["linear_growth"], v["weyl_law"]) == ("yes", "yes")
    assert v["text"] == "O(alpha) growth holds; Weyl law holds"


def test_count1d_both_methods_agree(capsys):
    code, doc = run_json(capsys, "count1d", "--spec", "gaussian",
                         "--alpha", "40", "--energy", "-1.5",
                         "--method", "both")
    assert code == 0
    rep = doc["report"]
    assert rep["agree"] is True
    assert rep["pruefer"]["count"] == rep["fd"]["count"]
    assert rep["pruefer"]["mode"] == "whole-line"


def test_count_breakdown_and_sandwich(capsys):
    code, doc = run_json(capsys, "count", "--spec", "square-well",
                         "--alpha", "200", "--breakdown",
                         "--check", "sandwich")
    assert code == 0
    rep = doc["report"]
    assert rep["total"] == 51
    assert rep["per_channel"]["0"] == 5
    assert rep["sandwich"]["ok"] is True
    assert rep["sandwich"]["difference"] in (0, 1)


def test_count_duality_check(capsys):
    code, doc = run_json(capsys, "count", "--spec", "annulus",
                         "--alpha", "30", "--check", "duality")
    assert code == 0
    assert doc["report"]["duality"]["ok"] is True


def test_bounds_divergent_serializes_as_infinite(capsys):
    code, doc = run_json(capsys, "bounds", "--spec", "counterexample",
                         "--alpha", "50")
    assert code == 0
    rep = doc["report"]
    assert rep["chad"] == "infinite"
    assert rep["chad_sharp"] == "infinite"
    assert isinstance(rep["weak"], float)
    assert rep["finite"]["chad"] is False
    assert rep["selected"]["bound"] == "chad"


def test_bounds_min_over_R_selection(capsys):
    code, doc = run_json(capsys, "bounds", "--spec", "gaussian",
                         "--alpha", "50", "--minR")
    rep = doc["report"]
    assert rep["selected"]["bound"] == "chad_min"
    assert rep["selected"]["value"] <= rep["chad"]


def test_sweep_writes_csv_and_json(capsys, tmp_path):
    csv_path = tmp_path / "t.csv"
    json_path = tmp_path / "t.json"
    code, out = run(capsys, "sweep", "--spec", "square-well",
                    "--alpha-min", "10", "--alpha-max", "40",
                    "--per-decade", "3",
                    "--csv", str(csv_path), "--json", str(json_path))
    assert code == 0
    header = csv_path.read_text(encoding="utf-8").splitlines()[0]
    assert header == ("alpha,N,N_over_alpha,N_radial_dirichlet,N_nonradial,"
                      "chad,chad_sharp,lt_nonradial,weak_bound")
    doc = json.loads(json_path.read_text(encoding="utf-8"))
    rep = doc["report"]
    assert rep["kind"] == "square-well"
    assert rep["weyl"]["verdict"] == "weyl-holds"
    assert len(rep["rows"]) == len(rep["ratio_deltas"]) + 1
    assert out == ""          # everything went to the files


def test_verify_passes_on_trivial_profile(capsys):
    code, doc = run_json(capsys, "verify", "--spec", "zero",
                         "--alpha", "10", "--n-random", "3")
    assert code == 0
    assert doc["report"]["ok"] is True
    assert doc["report"]["failures"] == 0
    assert all(c["ok"] for c in doc["report"]["checks"])


def test_json_out_redirects_stdout(capsys, tmp_path):
    path = tmp_path / "rep.json"
    code, out = run(capsys, "potential", "show", "--spec", "bump",
                    "--json-out", str(path))
    assert code == 0
    assert out == ""
    doc = json.loads(path.read_text(encoding="utf-8"))
    assert doc["report"]["kind"] == "bump"


def test_byte_identical_reruns(capsys):
    argv = ["seq", "--spec", "counterexample", "--K", "64"]
    _, first = run(capsys, *argv)
    _, second = run(capsys, *argv)
    assert first == second


def test_unknown_spec_exits_2(capsys):
    code = main(["potential", "show", "--spec", "no-such-profile"])
    assert code == 2
    err = capsys.readouterr().err
    assert "radcount:" in err


def test_bad_tolerance_exits_2():
    with pytest.raises(SystemExit) as e:
        main(["seq", "--spec", "zero", "--quad-abs-tol", "-1"])
    assert e.value.code == 2


def test_missing_subcommand_exits_2():
    with pytest.raises(SystemExit) as e:
        main([])
    assert e.value.code == 2


def test_mode_aliases_accepted(capsys):
    code, doc = run_json(capsys, "count1d", "--spec", "square-well",
                         "--alpha", "30", "--energy", "-2",
                         "--mode", "half")
    assert code == 0
    assert doc["report"]["pruefer"]["mode"] == "half-line-dirichlet"
