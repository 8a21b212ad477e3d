import json

import pytest

from isoclin.suites import SUITES, isoclinic_pairs, run_suite


@pytest.mark.parametrize("name", SUITES)
def test_each_suite_passes_small(name):
    (res,) = run_suite(name, 16)
    assert res.name == name
    assert res.instances and res.passed and res.failures == []


def test_all_is_deterministic():
    first = json.dumps([r.as_dict() for r in run_suite("all", 12)], sort_keys=True)
    again = json.dumps([r.as_dict() for r in run_suite("all", 12)], sort_keys=True)
    assert first == again


def test_pairs_include_d4_q8_and_self_pairs():
    pairs = {(a, b, n) for a, b, n, _ in isoclinic_pairs(8)}
    assert ("D4", "Q8", 1) in pairs or ("Q8", "D4", 1) in pairs
    assert ("D4", "D4", 1) in pairs


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_suite("t9", 8)
