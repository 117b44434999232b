import json

import pytest

from bruckbose.checks import (
    FIXTURES,
    Certificate,
    UsageError,
    export,
    load_fixture,
    run_check,
    run_fixture,
)
from bruckbose.spread import SpreadModel, build_spread


def test_count_conics_certificate():
    c = run_check("count-conics", 2)
    assert c.passed and c.enumerated == 7 and c.closed_form == 7
    d = c.to_dict()
    assert d["match"] is True and d["pass"] is True
    assert d["tower"]["extension_polynomial"] == [1, 1, 0, 1]
    assert d["seed"] is None and d["mode"] == "full"


def test_sampled_records_seed():
    c = run_check("theorem-forward", 3, mode="sampled", seed=11, samples=5)
    assert c.passed
    assert c.seed == 11 and c.sample_size == 5 and c.mode == "sampled"


def test_same_seed_byte_identical():
    a = run_check("count-orsp", 3, mode="sampled", seed=5).to_json(timing=False)
    b = run_check("count-orsp", 3, mode="sampled", seed=5).to_json(timing=False)
    assert a == b
    assert json.loads(a)["enumerated"] == 12168


def test_refusals():
    with pytest.raises(UsageError, match="--deep"):
        run_check("count-orsp", 3)
    with pytest.raises(UsageError, match="q <= 4"):
        run_check("count-conics", 5)
    with pytest.raises(UsageError):
        run_check("nope", 2)
    with pytest.raises(UsageError):
        run_check("count-conics", 6)
    with pytest.raises(UsageError):
        run_check("count-conics", 2, mode="partial")


def test_sampled_allowed_beyond_full_range():
    c = run_check("theorem-forward", 5, mode="sampled", seed=0, samples=2)
    assert c.passed and c.enumerated == 2 and c.q == 5


def test_export_round_trip(tmp_path):
    path = tmp_path / "spread.json"
    export(build_spread(2).to_json(), path)
    assert SpreadModel.from_json(json.loads(path.read_text())) is build_spread(2)
    c = run_check("spread-partition", 2)
    export(c, tmp_path / "c.json")
    assert json.loads((tmp_path / "c.json").read_text())["enumerated"] == 9
    with pytest.raises(ValueError):
        export(c, tmp_path / "c.yaml", format="yaml")


def test_export_surfaces_io_errors(tmp_path):
    with pytest.raises(OSError):
        export({"a": 1}, tmp_path / "missing" / "x.json")


@pytest.mark.parametrize("name", FIXTURES)
def test_fixture_fails_with_payload(name):
    cert = run_fixture(load_fixture(name))
    assert not cert.passed
    assert cert.counterexample and "reason" in cert.counterexample


def test_failing_certificate_line():
    c = Certificate("x", 2, {}, 1, 2, False, counterexample={"reason": "r"})
    assert c.line().startswith("FAIL x q=2")
    assert c.to_dict()["match"] is False


def test_parallel_matches_serial():
    a = run_check("theorem-forward", 2, mode="sampled", seed=3, samples=6, jobs=1)
    b = run_check("theorem-forward", 2, mode="sampled", seed=3, samples=6, jobs=2)
    assert a.to_json(timing=False) == b.to_json(timing=False)
