"""Acceptance criteria, each run through testlib at its stated tolerance.

Every criterion prints one PASS/FAIL line (visible with ``pytest -s`` or
``python tests/test_acceptance.py``).
"""

import time

import numpy as np
import pytest

from radonlh import testlib

CRITERIA = {
    1: ("worked example values of R*|t theta_2|", 1.0),
    2: ("quasi-radial round trip, n = 3, 4", 30.0),
    3: ("even dual round trip, n = 3, 4", None),
    4: ("Kelvin route, local and Marchaud, |h| = 0.5, 1, 2", 300.0),
    5: ("Erdelyi-Kober fixed point, left inverses, kappa", None),
    6: ("Funk spectral identity and Abel inverse", None),
    7: ("duality pairing by Monte Carlo, n = 3, 4", None),
    8: ("divergence gate for phi_p at p = n/(n-2)", None),
}


@pytest.fixture(scope="module")
def acceptance():
    return testlib.acceptance_cases()


def describe(r):
    if isinstance(r.got, str):
        return f"{r.case}:{r.key} raised {r.got}, expected {r.expected}"
    if r.expected is not None and np.ndim(r.got) == 1 and np.ndim(r.expected) == 0 and r.error is not None:
        return f"{r.case}:{r.key} {np.round(r.got, 4).tolist()} ends at {r.error:.4g}, needs > {r.expected:g}"
    return f"{r.case}:{r.key} error {r.error}"


def evaluate(cases, budget):
    """Run the cases of one criterion; the time budget applies per case."""
    failures, slowest = [], 0.0
    for case in cases:
        t0 = time.perf_counter()
        results = testlib.run_case(case)
        elapsed = time.perf_counter() - t0
        slowest = max(slowest, elapsed)
        failures += [describe(r) for r in results if not r.passed]
        if budget is not None and elapsed > budget:
            failures.append(f"{case.name}: {elapsed:.1f} s exceeds {budget:g} s")
    return failures, slowest


@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_criterion(k, acceptance):
    label, budget = CRITERIA[k]
    failures, slowest = evaluate(acceptance[k], budget)
    status = "PASS" if not failures else "FAIL"
    print(f"\n[criterion {k}] {status}: {label} (slowest case {slowest:.2f} s)")
    for f in failures:
        print(f"    {f}")
    assert not failures, "; ".join(failures)


if __name__ == "__main__":
    acc = testlib.acceptance_cases()
    for k, (label, budget) in CRITERIA.items():
        failures, slowest = evaluate(acc[k], budget)
        print(f"[criterion {k}] {'PASS' if not failures else 'FAIL'}: {label} ({slowest:.2f} s)")
