"""Tests for check results, reports and status helpers."""

import json

from cpvi.poly import a0, relation_poly, x
from cpvi.report import (
    FAIL,
    PASS,
    PASS_MOD_RELATION,
    CheckResult,
    Report,
    timed_check,
    zero_status,
)


def test_zero_status_trichotomy():
    assert zero_status((x - x).as_ratfun()) == PASS
    assert zero_status(relation_poly().as_ratfun()) == PASS_MOD_RELATION
    assert zero_status(a0.as_ratfun()) is None


def test_report_ok_logic():
    rep = Report("demo")
    rep.add(CheckResult("a", "symbolic", PASS))
    assert rep.ok
    rep.add(CheckResult("b", "symbolic", PASS_MOD_RELATION))
    assert rep.ok
    rep.add(CheckResult("c", "numeric", FAIL))
    assert not rep.ok


def test_json_is_sorted_and_stable():
    def build():
        rep = Report("demo")
        rep.add(CheckResult("z-last", "numeric", PASS, "d2", 12.5))
        rep.add(CheckResult("a-first", "symbolic", PASS, "d1", 3.25))
        return rep

    d1, d2 = build().to_dict(), build().to_dict()
    assert d1 == d2
    assert [c["check-id"] for c in d1["checks"]] == ["a-first", "z-last"]
    # identical modulo elapsed: zero the timing fields and compare texts
    for d in (d1, d2):
        for c in d["checks"]:
            c["elapsed-ms"] = 0
    assert json.dumps(d1, sort_keys=True) == json.dumps(d2, sort_keys=True)


def test_timed_check_traps_exceptions():
    rep = Report("demo")

    def boom():
        raise RuntimeError("broken oracle")

    res = timed_check(rep, "x", "symbolic", boom)
    assert res.status == FAIL
    assert "broken oracle" in res.detail
    assert not rep.ok


def test_timed_check_records_timing():
    rep = Report("demo")
    res = timed_check(rep, "x", "symbolic", lambda: (PASS, "fine"))
    assert res.elapsed_ms >= 0.0
    assert rep.ok
