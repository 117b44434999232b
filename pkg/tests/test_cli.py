import json

from bruckbose.cli import main


def test_spread_build(tmp_path, capsys):
    out = tmp_path / "s.json"
    assert main(["spread", "build", "--q", "2", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert len(data["elements"]) == 9 and len(data["transversals"]) == 3


def test_count_command_json(capsys):
    assert main(["verify", "lemma", "--name", "count-conics", "--q", "2", "--format", "json"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["enumerated"] == 7 and d["match"] and "elapsed_ms" in d


def test_reproducible_output_is_stable(capsys):
    args = ["verify", "check", "--name", "count-nrc", "--q", "3", "--mode", "sampled",
            "--seed", "2", "--samples", "1", "--format", "json", "--reproducible"]
    main(args)
    first = capsys.readouterr().out
    main(args)
    assert capsys.readouterr().out == first
    assert "elapsed_ms" not in first


def test_refusal_exit_code(capsys):
    assert main(["verify", "lemma", "--name", "count-orsp", "--q", "3"]) == 2
    assert "--deep" in capsys.readouterr().err


def test_bad_q_exit_code(capsys):
    assert main(["spread", "build", "--q", "6"]) == 2


def test_fixture_exit_code(capsys):
    assert main(["verify", "fixture", "non-special-conic.json", "--format", "json"]) == 1
    d = json.loads(capsys.readouterr().out)
    assert d["pass"] is False and d["counterexample"]["reason"]


def test_theorem_both_text(capsys):
    rc = main(["verify", "theorem", "--q", "3", "--mode", "sampled", "--seed", "1", "--samples", "5"])
    out = capsys.readouterr().out.splitlines()
    assert rc == 0 and len(out) == 2 and all(l.startswith("PASS") for l in out)


def test_build_surface(tmp_path):
    out = tmp_path / "b.json"
    assert main(["build-surface", "--q", "2", "--conic", "1", "--sigma", "5", "--nrc", "7", "--out", str(out)]) == 0
    d = json.loads(out.read_text())
    assert len(d["affine_points"]) == 6 and len(d["subplane_points"]) == 7
    assert {"tower", "pi_index", "conic", "nrc", "phi_matrix", "generators"} <= set(d)


def test_build_surface_bad_index(capsys):
    assert main(["build-surface", "--q", "2", "--conic", "99", "--sigma", "0", "--nrc", "0"]) == 2
