import io

import pytest

from refined_assortment.verify import CHECKS, REFERENCE_VALUES, Check, report, run_checks


@pytest.fixture(scope="module")
def baseline():
    return run_checks()


def _tamper(value):
    if isinstance(value, tuple):
        return (value[0] + 0.5, *value[1:])
    return value + 1.0


def test_all_pass(baseline):
    assert len(baseline) == len(REFERENCE_VALUES)
    failed = [r.line() for r in baseline if not r.passed]
    assert failed == []


def test_one_check_per_value():
    assert sorted(c.key for c in CHECKS) == sorted(REFERENCE_VALUES)


@pytest.mark.parametrize("key", sorted(REFERENCE_VALUES))
def test_fault_injection_breaks_exactly_one(key):
    values = dict(REFERENCE_VALUES, **{key: _tamper(REFERENCE_VALUES[key])})
    failed = [c.key for c, r in zip(CHECKS, run_checks(values)) if not r.passed]
    assert failed == [key]


def test_report_output():
    buf = io.StringIO()
    assert report(stream=buf) == 0
    lines = buf.getvalue().splitlines()
    assert sum(line.startswith("[PASS]") for line in lines) == len(CHECKS)
    assert any(line.startswith("[INFO]") for line in lines)


def test_report_nonzero_on_failure():
    values = dict(REFERENCE_VALUES, example2_taop_revenue=70.0)
    buf = io.StringIO()
    assert report(values, stream=buf) == 1
    assert sum(line.startswith("[FAIL]") for line in buf.getvalue().splitlines()) == 1


def test_errors_are_reported_not_raised():
    def boom():
        raise RuntimeError("no")

    res = Check("broken", "lp_unit_printed", boom).run(REFERENCE_VALUES)
    assert not res.passed and "error" in res.line()


def test_at_least_mode():
    check = Check("floor", "example2_heuristic_floor", lambda: 71.05, at_least=True)
    assert check.run(REFERENCE_VALUES).passed
    assert not check.run(dict(REFERENCE_VALUES, example2_heuristic_floor=72.0)).passed
