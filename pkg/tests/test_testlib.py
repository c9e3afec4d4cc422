import json
from math import pi

import numpy as np
import pytest

from radonlh import testlib
from radonlh.testlib import Expected, oracle_compare


def test_oracle_compare_examples():
    assert oracle_compare(3.1415, (3.1413, 0.001), 3)
    assert not oracle_compare(3.2, (3.1413, 0.001), 3)
    assert oracle_compare(1.0, 1.0000004, tol=1e-6)
    assert not oracle_compare(1.0, 1.00001, tol=1e-6)
    with pytest.raises(ValueError):
        oracle_compare(1.0, 1.0)


@pytest.fixture(scope="module")
def suite():
    return testlib.analytic_suite()


def test_suite_structure(suite):
    assert len(suite) >= 8
    assert set(testlib.INVERSION_ROUTES) <= {c.route for c in suite}
    names = {c.name for c in suite}
    for n in (3, 4, 5, 6):
        assert f"gaussian_quasiradial_n{n}" in names
    assert {"abs_t_theta2_n3", "kelvin_pair_n3", "phi_p_gate_n3", "theta2_t_n3"} <= names


def test_every_value_is_tagged(suite):
    for case in suite:
        for key, exp in case.expected.items():
            assert exp.provenance in testlib.PROVENANCE
            if exp.provenance == "DERIVED":
                assert exp.oracle
                assert key in case.oracles


def test_worked_example_values_are_tagged(suite):
    case = next(c for c in suite if c.name == "abs_t_theta2_n3")
    assert case.expected["(e1,e2)"].value == 0.5
    assert case.expected["(e1,e3)"].value == pytest.approx(1 / pi)
    assert all(e.provenance == "PAPER" for e in case.expected.values())


def test_kelvin_pair_oracle_is_the_line_integral(suite):
    case = next(c for c in suite if c.name == "kelvin_pair_n3")
    vals = case.expected["Phi_lines"].value
    assert np.allclose(vals, np.sqrt(pi) * np.exp(-np.array([0.25, 1.0, 4.0])), rtol=1e-10)


def test_derived_needs_oracle():
    with pytest.raises(ValueError):
        Expected(1.0, "DERIVED")
    with pytest.raises(ValueError):
        Expected(1.0, "GUESSED")


def test_recompute_refreshes_cache(suite):
    case = next(c for c in suite if c.name == "gaussian_quasiradial_n3")
    old = case.expected["forward"].value
    case.expected["forward"].value = -1.0
    case.recompute()
    assert case.expected["forward"].value == old


def test_run_and_report(tmp_path):
    cases = [testlib.abs_t_theta2_case(), testlib.theta2_t_case()]
    results = testlib.run_suite(cases)
    assert all(r.passed for r in results)
    text = testlib.report_json(results, tmp_path / "r.json")
    doc = json.loads((tmp_path / "r.json").read_text())
    assert doc == json.loads(text)
    assert doc["passed"] is True
    assert {"case", "expected", "got", "provenance", "passed"} <= set(doc["results"][0])


def test_failing_case_is_reported():
    case = testlib._case("wrong", 3, "dual", 1e-6, lambda: {"x": 2.0}, {"x": Expected(1.0, "TRIVIAL")})
    (res,) = testlib.run_case(case)
    assert not res.passed and res.error == pytest.approx(1.0)


def test_acceptance_cases_cover_all_criteria():
    acc = testlib.acceptance_cases()
    assert sorted(acc) == list(range(1, 9))
    for k, cases in acc.items():
        assert all(c.criterion == k for c in cases)
