"""Acceptance criteria 1-11, one test each.

Every test records a ``CRITERION n: PASS|FAIL`` line, shown in the pytest
terminal summary (also when the module is run as a script).
"""

import time

import pytest

from conftest import ACCEPTANCE_LINES
from supergc import scenarios as SC
from supergc.grammar import roundtrip_ok
from supergc.report import to_json

_CACHE: dict = {}


def _report(name):
    if name not in _CACHE:
        _CACHE[name] = SC.run_scenario(name)
    return _CACHE[name]


def _criterion(n, title, reports, limit=None):
    fails = [f"{r.scenario}:{c.name}" for r in reports for c in r.failures]
    secs = sum(r.seconds for r in reports)
    slow = limit is not None and secs >= limit
    ok = not fails and not slow
    detail = f"{sum(len(r.checks) for r in reports)} checks, {secs:.2f}s"
    if fails:
        detail += f"; failed: {', '.join(fails[:6])}" + (" ..." if len(fails) > 6 else "")
    if slow:
        detail += f"; over the {limit}s budget"
    ACCEPTANCE_LINES[n] = f"CRITERION {n}: {'PASS' if ok else 'FAIL'} {title} ({detail})"
    assert not fails, "\n".join(fails)
    assert not slow, f"{secs:.2f}s >= {limit}s"


def test_criterion_01_algebra_tables():
    rep = _report("tables")
    names = [c.name for c in rep.checks]
    assert sum(n.startswith("table1[") for n in names) == 81
    assert sum(n.startswith("table2[") for n in names) == 64
    _criterion(1, "algebra tables and classical relations", [rep], limit=5)


def test_criterion_02_operator_identities():
    _criterion(2, "odd operator identities on 100 random expressions", [_report("operators")])


def test_criterion_03_zero_curvature_chain():
    _criterion(3, "zero-curvature entries and reduction", [_report("gw-zcc")], limit=10)


def test_criterion_04_sine_gordon():
    _criterion(4, "super sine-Gordon comparison", [_report("sine-gordon")])


def test_criterion_05_exp_expansion():
    _criterion(5, "exponential expansion", [_report("exp-expansion")])


def test_criterion_06_geometry():
    _criterion(6, "fundamental forms and curvatures", [_report("geometry")])


def test_criterion_07_solutions():
    rep = _report("solutions")
    assert any(c.name == "g14[eps=1].degenerate tangents" and c.ok for c in rep.checks)
    _criterion(7, "invariant solutions", [rep], limit=15)


def test_criterion_08_bch():
    _criterion(8, "conjugation closed forms and series", [_report("bch")])


def test_criterion_09_classification():
    _criterion(9, "catalog and projection of the classical algebra",
               [_report("catalog"), _report("classical-pi")])


def test_criterion_10_invariance():
    _criterion(10, "symmetry flows preserve the systems", [_report("invariance")])


def test_criterion_11_frontend():
    names = ["tables", "operators", "gw-zcc", "sine-gordon", "exp-expansion", "geometry",
             "solutions", "bch", "catalog", "classical-pi", "invariance"]
    bad, count = [], 0
    for n in names:
        for c in _report(n).checks:
            for e in c.exprs:
                count += 1
                if not roundtrip_ok(e):
                    bad.append(f"{n}:{c.name}")
    first = to_json(SC.run_all())
    second = to_json(SC.run_all())
    ok = not bad and first == second
    detail = f"{count} printed forms round-trip" if not bad else f"round-trip failed: {bad[:5]}"
    detail += "; reports identical" if first == second else "; reports differ"
    ACCEPTANCE_LINES[11] = f"CRITERION 11: {'PASS' if ok else 'FAIL'} frontend ({detail})"
    assert not bad
    assert first == second


if __name__ == "__main__":
    import sys
    # the conftest summary hook prints the criterion lines
    sys.exit(pytest.main([__file__, "-q"]))
