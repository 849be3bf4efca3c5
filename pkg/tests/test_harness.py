"""Suite harness: report shape, determinism, gating, and the tower demo."""

import json

import pytest

from xpforge.catalog import builtin_catalog, catalog_entry, load_catalog_dir
from xpforge.harness import (
    SCHEMA_VERSION,
    SUITES,
    run_suite,
    tower_demo,
)

SMALL = [catalog_entry(n) for n in ("C2", "C4", "C2xC2", "D8")]


def strip_timing(report_dict):
    out = dict(report_dict)
    out["results"] = [
        {k: v for k, v in row.items() if k != "seconds"} for row in report_dict["results"]
    ]
    return out


# ---------------------------------------------------------------- catalog


def test_builtin_catalog_has_twelve_entries():
    names = [e.name for e in builtin_catalog()]
    assert len(names) == 12
    assert len(set(names)) == 12
    assert "Heis27" in names and "Q8" in names


def test_catalog_entry_unknown_name():
    with pytest.raises(KeyError):
        catalog_entry("NoSuchGroup")


def test_catalog_entries_build_to_expected_order():
    for e in builtin_catalog():
        pres = e.presentation()
        assert pres.ngens >= 1
        assert e.expected_order % e.p == 0


def test_load_catalog_dir(tmp_path):
    (tmp_path / "c6.pres").write_text("gens a\nrels a^6\n")
    (tmp_path / "k4.txt").write_text("gens x, y\nrels x^2, y^2, [x,y]\n")
    entries = load_catalog_dir(tmp_path)
    names = sorted(e.name for e in entries)
    assert names == ["c6", "k4"]
    assert all(e.expected_h2 is None for e in entries)


def test_load_catalog_dir_empty(tmp_path):
    with pytest.raises(ValueError):
        load_catalog_dir(tmp_path)


# ---------------------------------------------------------------- report shape


def test_report_shape_and_schema():
    rep = run_suite("rtrivial", entries=SMALL)
    d = rep.as_dict()
    assert d["schema"] == SCHEMA_VERSION == 1
    assert d["suite"] == "rtrivial"
    assert d["ok"] is True
    assert set(d["summary"]) == {"pass", "fail", "gated"}
    for row in d["results"]:
        assert set(row) == {"suite", "entry", "check", "status", "seconds", "detail"}
        assert row["status"] in ("pass", "fail", "gated")
    # to_json round-trips
    assert json.loads(rep.to_json())["suite"] == "rtrivial"


def test_unknown_suite_rejected():
    with pytest.raises(ValueError):
        run_suite("bogus", entries=SMALL)


def test_every_named_suite_runs_on_small_entries():
    for name in SUITES:
        if name == "tower":
            continue  # entry-independent, exercised separately
        rep = run_suite(name, entries=SMALL)
        assert rep.ok, f"{name}: {[r for r in rep.rows if r['status'] == 'fail']}"


def test_suite_reports_are_deterministic():
    a = strip_timing(run_suite("orders", entries=SMALL).as_dict())
    b = strip_timing(run_suite("orders", entries=SMALL).as_dict())
    assert a == b


# ---------------------------------------------------------------- gating

GATED27 = [catalog_entry("Mod27")]


def test_nu_dependent_suites_gate_order_27_entries():
    for name in ("iso99", "delta-central", "powerful"):
        rep = run_suite(name, entries=GATED27)
        assert rep.ok  # gated rows do not count as failures
        gated = [r for r in rep.rows if r["status"] == "gated"]
        assert gated, name
        assert gated[0]["detail"]["predicted_order"] == 59049
        assert gated[0]["detail"]["gate"] == 20000


def test_schur_suite_does_not_need_nu_for_gated_entries():
    # multiplier routes still agree using the direct pairing presentation
    rep = run_suite("schur", entries=GATED27)
    assert rep.ok
    assert all(r["status"] == "pass" for r in rep.rows)


# ---------------------------------------------------------------- tower


def test_tower_demo_depth_validation():
    with pytest.raises(ValueError):
        tower_demo(2, 0)


def test_tower_demo_depth_one_is_vacuous():
    rep = tower_demo(2, 1)
    assert rep.ok
    assert len(rep.rows) == 1
    assert "single level" in rep.rows[0]["detail"]["note"]


def test_tower_demo_two_three():
    rep = tower_demo(2, 3)
    assert rep.ok
    entries = {r["entry"] for r in rep.rows}
    assert "C8->C4" in entries and "C4->C2" in entries
    checks = {r["check"] for r in rep.rows}
    assert {"doubled-step", "nu-step", "functoriality"} <= checks


def test_tower_suite_matches_demo():
    via_suite = run_suite("tower", entries=SMALL)
    assert via_suite.ok
    entries = {r["entry"] for r in via_suite.rows}
    assert "C9->C3" in entries  # the p=3 chain is included regardless of entries
