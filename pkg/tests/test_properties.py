import math

import pytest

from qmeasure.properties import FAMILIES, FAMILY_BY_NAME, Family, run_family, run_suite
from qmeasure.rng import SplitMix64


def test_registry_names_are_unique():
    assert len(FAMILY_BY_NAME) == len(FAMILIES)
    groups = {f.group for f in FAMILIES}
    assert groups == {"finite_measure", "linalg_core", "qmeasure_ops", "quantization", "path_system"}


def test_suite_passes_at_reference_settings():
    results = run_suite(42, 30, 8)
    bad = [(r.name, r.worst) for r in results if not r.ok]
    assert not bad


def test_subset_does_not_shift_streams():
    full = {r.name: r for r in run_suite(5, 4, 6)}
    part = run_suite(5, 4, 6, families=["path_bridge", "norm_law"])
    for r in part:
        assert r.worst == full[r.name].worst and r.worst_case == full[r.name].worst_case


def test_run_family_counts_failures_and_nan():
    values = iter([0.0, float("nan"), 0.5, 1e-20])
    fam = Family("fake", lambda rng, dim: next(values), 1e-12, "test")
    res = run_family(fam, SplitMix64(0), 4, 3)
    assert (res.passed, res.cases) == (2, 4)
    assert math.isinf(res.worst) and res.worst_case == 1
    assert not res.ok


def test_cases_must_be_positive():
    with pytest.raises(ValueError):
        run_suite(1, 0, 4)
