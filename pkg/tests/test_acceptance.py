"""Acceptance criteria, each at its stated sample size and tolerance.

Randomized criteria drive the registered property families with a fixed
seed; every family applies its own tolerance (1e-12 for exact identities,
1e-10 where an eigensolve is involved).  Results are summarized as one
PASS/FAIL line per criterion at the end of the pytest run.
"""

import io
import json
import time

import numpy as np
import pytest

from qmeasure import (
    CapExceeded,
    MeasureSpace,
    PathConfig,
    UnitarySystem,
    build_ensemble,
    dense_decoherence_matrix,
    path_q_measure,
    pure_state,
    quantum_integral,
    simple_quadratic_form,
    tail_sum,
)
from qmeasure.cli import main
from qmeasure.properties import FAMILY_BY_NAME, random_system, run_family
from qmeasure.rng import SplitMix64

SEED = 20240917
H = np.array([[1, 1], [1, -1]]) / np.sqrt(2)


def check_families(record, names, cases, dim_max, seed=SEED):
    root = SplitMix64(seed)
    failures = []
    for name in names:
        res = run_family(FAMILY_BY_NAME[name], root.spawn(), cases, dim_max)
        record(name, f"{res.passed}/{res.cases} worst {res.worst:.1e}")
        if not res.ok:
            failures.append(f"{name}: {res.cases - res.passed} failures, worst {res.worst:.3e} (case {res.worst_case})")
    assert not failures, failures


@pytest.fixture
def record(record_property):
    return record_property


@pytest.mark.criterion(1, "norm law for decoherence operators")
def test_norm_law(record):
    start = time.perf_counter()
    check_families(record, ["norm_law"], 500, 16)
    elapsed = time.perf_counter() - start
    record("seconds", f"{elapsed:.2f}")
    assert elapsed < 5.0


@pytest.mark.criterion(2, "operator identities, grade-2 additivity, interference, null-event laws")
def test_operator_identities(record):
    names = [
        "d_additivity",
        "d_conjugate_symmetry",
        "d_square_law",
        "d_polar_laws",
        "mu_grade2",
        "interference_decomposition",
        "disjoint_product_zero",
        "null_iff",
        "null_union_c",
        "null_union_d",
    ]
    check_families(record, names, 500, 16)


@pytest.mark.criterion(3, "Gram positivity")
def test_gram_positivity(record):
    check_families(record, ["gram_positivity", "gram_matrix_psd"], 200, 16)


@pytest.mark.criterion(4, "quantization positivity and effect bound")
def test_quantization_positivity(record):
    check_families(record, ["quantize_positivity", "effect_bound"], 500, 16)


@pytest.mark.criterion(5, "trace, tail-sum and quadratic-form integrals agree")
def test_triple_oracle(record):
    check_families(record, ["oracle_agreement"], 500, 16)


@pytest.mark.criterion(5, "trace, tail-sum and quadratic-form integrals agree")
def test_triple_oracle_fixture(record):
    space = MeasureSpace.uniform(2)
    u = np.ones(2)
    rho = pure_state(space, u)
    f = np.array([1.0, 2.0])
    values = [quantum_integral(rho, f), tail_sum(rho, f), simple_quadratic_form(space, f, u)]
    record("fixture", values)
    assert values == pytest.approx([1.25] * 3, abs=1e-10)


@pytest.mark.criterion(6, "quantization grade-2 additivity")
def test_quantization_grade2(record):
    check_families(record, ["quantize_grade2"], 200, 16)


@pytest.mark.criterion(7, "path normalization and decoherence-matrix state properties")
def test_path_state(record):
    # the families draw m <= 3 sites and horizon n <= 4
    check_families(record, ["path_normalization", "path_state"], 300, 3)


@pytest.mark.criterion(8, "Hadamard-walk interference")
def test_hadamard_fixture(record):
    ens = build_ensemble(UnitarySystem.constant(H, 2), [1, 0], 2)
    sp = ens.space
    mu0, mu1 = path_q_measure(ens, sp.final_site(0)), path_q_measure(ens, sp.final_site(1))
    a, b = sp.explicit(["000"]), sp.explicit(["010"])
    singles = path_q_measure(ens, a), path_q_measure(ens, b)
    pair = path_q_measure(ens, a | b)
    record("mu", (mu0, mu1))
    assert abs(mu0 - 1) <= 1e-12 and abs(mu1) <= 1e-12
    assert singles == pytest.approx((0.25, 0.25), abs=1e-12)
    assert abs(pair - sum(singles)) > 0.4


@pytest.mark.criterion(9, "low-rank path decoherence equals trace against the dense matrix")
def test_bridge(record):
    check_families(record, ["path_bridge"], 200, 2)


@pytest.mark.criterion(10, "performance at m=2, n=20 and dense-cap refusal")
def test_performance(record):
    sys = UnitarySystem.constant(H, 20)
    build_ensemble(UnitarySystem.constant(H, 3), [1, 0], 3)  # compile outside the timing
    start = time.perf_counter()
    ens = build_ensemble(sys, [1, 0], 20)
    elapsed = time.perf_counter() - start
    residual = ens.normalization_residual()
    record("seconds", f"{elapsed:.2f}")
    record("residual", f"{residual:.1e}")
    assert ens.amplitudes.shape == (2_097_152,)
    assert residual <= 1e-9
    assert elapsed < 5.0


@pytest.mark.criterion(10, "performance at m=2, n=20 and dense-cap refusal")
def test_dense_cap():
    sys = UnitarySystem.constant(H, 6)
    with pytest.raises(CapExceeded):
        dense_decoherence_matrix(build_ensemble(sys, [1, 0], 6, PathConfig(dense_cap=64)))
    assert dense_decoherence_matrix(build_ensemble(sys, [1, 0], 5, PathConfig(dense_cap=64))).shape == (64, 64)
    with pytest.raises(CapExceeded):
        dense_decoherence_matrix(build_ensemble(UnitarySystem.constant(H, 12), [1, 0], 12))


@pytest.mark.criterion(11, "deterministic check reports and worker-count invariance")
def test_check_is_byte_identical(record):
    outputs = []
    for _ in range(2):
        out = io.StringIO()
        code = main(["--format", "json", "check", "--seed", "42", "--cases", "100", "--dim-max", "8"], out=out)
        outputs.append((code, out.getvalue()))
    assert outputs[0] == outputs[1]
    assert outputs[0][0] == 0
    assert json.loads(outputs[0][1])["all_passed"]


@pytest.mark.criterion(11, "deterministic check reports and worker-count invariance")
def test_workers_agree(record):
    rng = SplitMix64(SEED)
    worst = 0.0
    for _ in range(50):
        sys, psi, n = random_system(rng, 3, 5)
        one = build_ensemble(sys, psi, n, workers=1)
        for k in (2, 3, 8):
            many = build_ensemble(sys, psi, n, workers=k)
            worst = max(worst, float(np.max(np.abs(one.amplitudes - many.amplitudes))))
    sys = UnitarySystem.constant(H, 16)
    one, four = build_ensemble(sys, [1, 0], 16), build_ensemble(sys, [1, 0], 16, workers=4)
    worst = max(worst, float(np.max(np.abs(one.amplitudes - four.amplitudes))))
    record("max difference", worst)
    assert worst <= 1e-12
