"""Randomized property families.

Each family draws one random case from a :class:`SplitMix64` and returns the
case residual (0 for an exact pass).  :func:`run_family` repeats a family
with per-case child generators; :func:`run_suite` runs families in registry
order, which is what the ``check`` command reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import decoherence as dec
from . import measure as fm
from . import paths as ps
from . import quantization as qz
from .linalg import LinearOperator, embed, hermitian_eig, operator_norm
from .rng import SplitMix64

EXACT = 1e-12
SPECTRAL = 1e-10


# ---------------------------------------------------------------------------
# random objects
# ---------------------------------------------------------------------------


def random_space(rng: SplitMix64, dim_max: int, probability: bool = True, null_rate: float = 0.2) -> fm.MeasureSpace:
    n = rng.integers(1, dim_max + 1)
    w = rng.uniform(n)
    w[rng.bernoulli(n, null_rate)] = 0.0
    if not np.any(w > 0):
        w[rng.integers(0, n)] = 1.0
    if probability:
        w = w / w.sum()
    else:
        w = w * rng.uniform(low=0.5, high=4.0)
    return fm.MeasureSpace(w)


def random_event(rng: SplitMix64, n: int, p: float = 0.5) -> fm.Event:
    return fm.Event(rng.bernoulli(n, p))


def random_partition(rng: SplitMix64, n: int, k: int) -> list[fm.Event]:
    """k mutually disjoint events; outcomes labelled k belong to none."""
    labels = rng.integers(0, k + 1, n)
    return [fm.Event(labels == j) for j in range(k)]


def random_vector(rng: SplitMix64, n: int) -> np.ndarray:
    return rng.complex(n)


def random_rv(rng: SplitMix64, n: int, kind: str = "signed") -> np.ndarray:
    """Random variable; half the draws come from a coarse grid so values tie."""
    if rng.uniform() < 0.5:
        f = rng.integers(-4, 5, n).astype(np.float64) / 2.0
    else:
        f = rng.uniform(n, -2.0, 2.0)
    if kind == "nonneg":
        f = np.abs(f)
    elif kind == "fuzzy":
        f = np.abs(f) / 2.0
    return f


def _unit_vector(rng: SplitMix64, space: fm.MeasureSpace) -> np.ndarray:
    while True:
        u = random_vector(rng, space.size)
        nrm = fm.norm(space, u)
        if nrm > 1e-3:
            return u / nrm


def random_pure(rng: SplitMix64, space: fm.MeasureSpace) -> dec.State:
    return dec.pure_state(space, _unit_vector(rng, space))


def random_mixed(rng: SplitMix64, space: fm.MeasureSpace) -> dec.State:
    n = space.size
    g = rng.complex((n, rng.integers(1, n + 1)))
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T) / np.trace(rho).real
    return dec.State.from_matrix(space, rho)


def random_state(rng: SplitMix64, space: fm.MeasureSpace) -> dec.State:
    return random_pure(rng, space) if rng.uniform() < 0.5 else random_mixed(rng, space)


def random_unitary(rng: SplitMix64, m: int, layers: int = 2) -> np.ndarray:
    """Product of random Givens rotations and diagonal phases."""
    u = np.diag(np.exp(1j * rng.uniform(m, 0.0, 2 * math.pi)))
    for _ in range(layers):
        for p in range(m - 1):
            for q in range(p + 1, m):
                theta = rng.uniform(low=0.0, high=2 * math.pi)
                phi = rng.uniform(low=0.0, high=2 * math.pi)
                g = np.eye(m, dtype=np.complex128)
                g[p, p] = math.cos(theta)
                g[q, q] = math.cos(theta)
                g[p, q] = -np.exp(1j * phi) * math.sin(theta)
                g[q, p] = np.exp(-1j * phi) * math.sin(theta)
                u = g @ u
    return u


def random_system(rng: SplitMix64, m_max: int = 3, n_max: int = 4) -> tuple[ps.UnitarySystem, np.ndarray, int]:
    m = rng.integers(1, m_max + 1)
    n = rng.integers(0, n_max + 1)
    steps = [random_unitary(rng, m) for _ in range(n)]
    psi = rng.complex(m)
    psi = psi / np.linalg.norm(psi)
    if m > 1 and rng.uniform() < 0.3:
        psi = np.zeros(m, dtype=np.complex128)
        psi[rng.integers(0, m)] = 1.0
    return ps.UnitarySystem(steps, dim=m), psi, n


def random_ensemble(rng: SplitMix64, m_max: int = 3, n_max: int = 4) -> ps.PathEnsemble:
    sys, psi, n = random_system(rng, m_max, n_max)
    return ps.build_ensemble(sys, psi, n)


def _diff(a, b) -> float:
    a = a.matrix if isinstance(a, LinearOperator) else np.asarray(a)
    b = b.matrix if isinstance(b, LinearOperator) else np.asarray(b)
    return float(np.max(np.abs(a - b), initial=0.0))


D = dec.decoherence_operator
MU = dec.q_measure_operator


# ---------------------------------------------------------------------------
# finite measure / linear algebra
# ---------------------------------------------------------------------------


def nu_additivity(rng, dim_max):
    space = random_space(rng, dim_max, probability=rng.uniform() < 0.5)
    A, B = random_partition(rng, space.size, 2)
    return abs(fm.nu(space, A | B) - fm.nu(space, A) - fm.nu(space, B))


def chi_norm(rng, dim_max):
    space = random_space(rng, dim_max)
    A = random_event(rng, space.size)
    return abs(fm.inner(space, fm.chi(space, A), fm.chi(space, A)) - fm.nu(space, A))


def cauchy_schwarz(rng, dim_max):
    space = random_space(rng, dim_max, probability=False)
    f, g = random_vector(rng, space.size), random_vector(rng, space.size)
    gap = abs(fm.inner(space, f, g)) ** 2 - fm.inner(space, f, f).real * fm.inner(space, g, g).real
    return max(gap, 0.0)


def expectation_bound(rng, dim_max):
    space = random_space(rng, dim_max)
    f = random_rv(rng, space.size)
    return max(abs(fm.expectation(space, f)) - fm.norm(space, f), 0.0)


def simple_form_roundtrip(rng, dim_max):
    n = rng.integers(1, dim_max + 1)
    f = random_rv(rng, n, "nonneg")
    form = fm.simple_form(f)
    ok = np.all(np.diff(form.levels) > 0) and all(
        form.upper_events[j] == _union(form.level_events[j:], n) for j in range(len(form.levels))
    )
    return _diff(form.reconstruct(), f) if ok else math.inf


def _union(events, n):
    out = fm.Event(np.zeros(n, dtype=bool))
    for e in events:
        out = out | e
    return out


def embed_isometry(rng, dim_max):
    space = random_space(rng, dim_max, probability=False)
    f, g = random_vector(rng, space.size), random_vector(rng, space.size)
    return abs(np.vdot(embed(space, f), embed(space, g)) - fm.inner(space, f, g))


def _random_hermitian(rng, n):
    g = rng.complex((n, n))
    return 0.5 * (g + g.conj().T)


def eig_invariants(rng, dim_max):
    n = rng.integers(1, max(dim_max, 1) * 2 + 1)
    n = min(n, 32)
    a = _random_hermitian(rng, n)
    eig = hermitian_eig(a)
    recon = float(np.linalg.norm(a - eig.reconstruct())) / max(1.0, float(np.linalg.norm(a)))
    ortho = float(np.linalg.norm(eig.eigenvectors.conj().T @ eig.eigenvectors - np.eye(n)))
    ascending = np.all(np.diff(eig.eigenvalues) >= 0)
    return max(recon, ortho) if ascending else math.inf


def trace_basis_free(rng, dim_max):
    a = _random_hermitian(rng, rng.integers(1, dim_max + 1))
    return abs(np.trace(a).real - float(np.sum(hermitian_eig(a).eigenvalues)))


def norm_is_spectral_radius(rng, dim_max):
    a = _random_hermitian(rng, rng.integers(1, dim_max + 1))
    return abs(operator_norm(a) - float(np.max(np.abs(hermitian_eig(a).eigenvalues))))


def adjoint_consistency(rng, dim_max):
    space = random_space(rng, dim_max, probability=False)
    n = space.size
    T = LinearOperator.from_kernel(space, rng.complex((n, n)))
    f, g = random_vector(rng, n), random_vector(rng, n)
    lhs = fm.inner(space, T.apply(f), g)
    rhs = fm.inner(space, f, T.adjoint().apply(g))
    involution = 0.0 if np.array_equal(T.adjoint().adjoint().matrix, T.matrix) else math.inf
    return max(abs(lhs - rhs), involution)


# ---------------------------------------------------------------------------
# decoherence operators and q-measures
# ---------------------------------------------------------------------------


def d_additivity(rng, dim_max):
    space = random_space(rng, dim_max)
    A, B = random_partition(rng, space.size, 2)
    C = random_event(rng, space.size)
    return _diff(D(space, A | B, C), D(space, A, C) + D(space, B, C))


def d_conjugate_symmetry(rng, dim_max):
    space = random_space(rng, dim_max)
    A, B = random_event(rng, space.size), random_event(rng, space.size)
    return _diff(D(space, A, B).adjoint(), D(space, B, A))


def d_square_law(rng, dim_max):
    space = random_space(rng, dim_max)
    A, B = random_event(rng, space.size), random_event(rng, space.size)
    d = D(space, A, B)
    return _diff(d @ d, fm.nu(space, A & B) * d)


def d_polar_laws(rng, dim_max):
    space = random_space(rng, dim_max)
    A, B = random_event(rng, space.size), random_event(rng, space.size)
    d = D(space, A, B)
    return max(
        _diff(d @ d.adjoint(), fm.nu(space, B) * MU(space, A)),
        _diff(d.adjoint() @ d, fm.nu(space, A) * MU(space, B)),
    )


def gram_positivity(rng, dim_max):
    space = random_space(rng, dim_max)
    k = rng.integers(1, 6)
    events = [random_event(rng, space.size) for _ in range(k)]
    c = rng.complex(k)
    total = LinearOperator.zero(space)
    for i in range(k):
        for j in range(k):
            total = total + (c[i] * np.conj(c[j])) * D(space, events[i], events[j])
    return max(-float(hermitian_eig(total).eigenvalues[0]), 0.0)


def mu_grade2(rng, dim_max):
    space = random_space(rng, dim_max)
    A, B, C = random_partition(rng, space.size, 3)
    rhs = MU(space, A | B) + MU(space, A | C) + MU(space, B | C) - MU(space, A) - MU(space, B) - MU(space, C)
    return _diff(MU(space, A | B | C), rhs)


def mu_rho_grade2(rng, dim_max):
    space = random_space(rng, dim_max)
    rho = random_state(rng, space)
    A, B, C = random_partition(rng, space.size, 3)
    q = lambda E: dec.q_measure(rho, E)  # noqa: E731
    return abs(q(A | B | C) - (q(A | B) + q(A | C) + q(B | C) - q(A) - q(B) - q(C)))


def interference_decomposition(rng, dim_max):
    space = random_space(rng, dim_max)
    A, B = random_partition(rng, space.size, 2)
    lhs = MU(space, A | B) - MU(space, A) - MU(space, B)
    I = dec.interference(space, A, B)
    symmetric = _diff(I, dec.interference(space, B, A))
    return max(_diff(lhs, I), symmetric, I.hermitian_residual())


def disjoint_product_zero(rng, dim_max):
    space = random_space(rng, dim_max)
    A, B = random_partition(rng, space.size, 2)
    return _diff(MU(space, A) @ MU(space, B), np.zeros((space.size, space.size)))


def null_iff(rng, dim_max):
    space = random_space(rng, dim_max, null_rate=0.5)
    A = random_event(rng, space.size, p=0.3)
    is_zero = not np.any(MU(space, A).matrix)
    return 0.0 if is_zero == (fm.nu(space, A) == 0.0) else math.inf


def _null_event(rng, space):
    """A nonempty null event when the space has null outcomes, else empty."""
    null = np.flatnonzero(space.weights == 0)
    mask = np.zeros(space.size, dtype=bool)
    if null.size:
        mask[null[rng.bernoulli(null.size, 0.7)]] = True
    return fm.Event(mask)


def null_union_c(rng, dim_max):
    space = random_space(rng, dim_max, null_rate=0.5)
    A = _null_event(rng, space)
    B = random_event(rng, space.size) - A
    if np.any(MU(space, A).matrix):
        return math.inf
    return _diff(MU(space, A | B), MU(space, B))


def null_union_d(rng, dim_max):
    space = random_space(rng, dim_max, null_rate=0.5)
    U = _null_event(rng, space)
    A = fm.Event(U.mask & rng.bernoulli(space.size, 0.5))
    B = U - A
    if np.any(MU(space, A | B).matrix):
        return math.inf
    return max(_diff(MU(space, A), 0 * MU(space, A)), _diff(MU(space, B), 0 * MU(space, B)))


def functional_additivity(rng, dim_max):
    space = random_space(rng, dim_max)
    rho = random_state(rng, space)
    k = rng.integers(1, 5)
    parts = random_partition(rng, space.size, k)
    B = random_event(rng, space.size)
    whole = _union(parts, space.size)
    total = sum(dec.decoherence_functional(rho, P, B) for P in parts)
    return abs(dec.decoherence_functional(rho, whole, B) - total)


def functional_bounds(rng, dim_max):
    space = random_space(rng, dim_max)
    rho = random_state(rng, space)
    A, B = random_event(rng, space.size), random_event(rng, space.size)
    dab = dec.decoherence_functional(rho, A, B)
    sym = abs(dab - np.conj(dec.decoherence_functional(rho, B, A)))
    bound = max(abs(dab) - math.sqrt(fm.nu(space, A) * fm.nu(space, B)), 0.0)
    qbound = max(dec.q_measure(rho, A) - fm.nu(space, A), 0.0)
    return max(sym, bound, qbound)


def gram_matrix_psd(rng, dim_max):
    space = random_space(rng, dim_max)
    rho = random_state(rng, space)
    events = [random_event(rng, space.size) for _ in range(rng.integers(1, 6))]
    return max(-float(hermitian_eig(dec.gram_matrix(rho, events)).eigenvalues[0]), 0.0)


def norm_law(rng, dim_max):
    space = random_space(rng, dim_max)
    A, B = random_event(rng, space.size), random_event(rng, space.size)
    expected = math.sqrt(fm.nu(space, A)) * math.sqrt(fm.nu(space, B))
    return abs(operator_norm(D(space, A, B)) - expected)


def _nested_pair(rng, space):
    A = random_event(rng, space.size, p=0.7)
    Ai = fm.Event(A.mask & rng.bernoulli(space.size, 0.6))
    return A, Ai


def continuity_d(rng, dim_max):
    space = random_space(rng, dim_max)
    A, Ai = _nested_pair(rng, space)
    B = random_event(rng, space.size)
    gap = operator_norm(D(space, A, B) - D(space, Ai, B))
    return max(gap - math.sqrt(max(fm.nu(space, A) - fm.nu(space, Ai), 0.0)), 0.0)


def continuity_mu(rng, dim_max):
    space = random_space(rng, dim_max)
    A, Ai = _nested_pair(rng, space)
    gap = operator_norm(MU(space, A) - MU(space, Ai))
    bound = 2.0 * math.sqrt(fm.nu(space, A)) * math.sqrt(max(fm.nu(space, A) - fm.nu(space, Ai), 0.0))
    return max(gap - bound, 0.0)


# ---------------------------------------------------------------------------
# quantization
# ---------------------------------------------------------------------------


def quantize_positivity(rng, dim_max):
    space = random_space(rng, dim_max)
    f = random_rv(rng, space.size, "nonneg")
    return max(-float(hermitian_eig(qz.quantize(space, f)).eigenvalues[0]), 0.0)


def effect_bound(rng, dim_max):
    space = random_space(rng, dim_max)
    f = random_rv(rng, space.size, "fuzzy")
    lam = hermitian_eig(qz.quantize(space, f)).eigenvalues
    return max(-float(lam[0]), float(lam[-1]) - 1.0, 0.0)


def quantize_norm_bound(rng, dim_max):
    space = random_space(rng, dim_max)
    f = random_rv(rng, space.size, "nonneg")
    return max(operator_norm(qz.quantize(space, f)) - fm.norm(space, f), 0.0)


def quantize_homogeneity(rng, dim_max):
    space = random_space(rng, dim_max)
    f = random_rv(rng, space.size)
    worst = 0.0
    for alpha in (-2.0, -1.0, 0.0, 0.5, 3.0):
        lhs, rhs = qz.scale_check(space, f, alpha)
        worst = max(worst, _diff(lhs, rhs))
    return worst


def _disjoint_rvs(rng, n):
    parts = random_partition(rng, n, 3)
    out = []
    for P in parts:
        v = random_rv(rng, n)
        v[~P.mask] = 0.0
        out.append(v)
    return out


def quantize_grade2(rng, dim_max):
    space = random_space(rng, dim_max)
    f, g, h = _disjoint_rvs(rng, space.size)
    Q = lambda v: qz.quantize(space, v)  # noqa: E731
    rhs = Q(f + g) + Q(f + h) + Q(g + h) - Q(f) - Q(g) - Q(h)
    return _diff(Q(f + g + h), rhs)


def quantize_lipschitz(rng, dim_max):
    space = random_space(rng, dim_max)
    f = random_rv(rng, space.size, "nonneg")
    g = f * rng.uniform(space.size)
    gap = operator_norm(qz.quantize(space, f) - qz.quantize(space, g))
    return max(gap - 2.0 * fm.norm(space, f - g), 0.0)


def sharp_events(rng, dim_max):
    space = random_space(rng, dim_max)
    A = random_event(rng, space.size)
    nu_a = fm.nu(space, A)
    q = qz.quantize(space, fm.chi(space, A))
    if nu_a == 0.0:
        return _diff(q, LinearOperator.zero(space))
    x = embed(space, fm.chi(space, A))
    proj = np.outer(x, x.conj()) / nu_a
    return max(_diff(q, nu_a * proj), _diff(q, MU(space, A)))


def oracle_agreement(rng, dim_max):
    space = random_space(rng, dim_max)
    f = random_rv(rng, space.size, rng.choice(["signed", "nonneg"]))
    third = None
    if rng.uniform() < 0.5:
        u = _unit_vector(rng, space)
        rho = dec.pure_state(space, u)
        fp, fn = fm.pos_neg_split(f)
        third = qz.simple_quadratic_form(space, fp, u) - qz.simple_quadratic_form(space, fn, u)
    else:
        rho = random_mixed(rng, space)
    trace = qz.quantum_integral(rho, f)
    tail = qz.tail_sum(rho, f)
    worst = abs(trace - tail)
    if third is not None:
        worst = max(worst, abs(trace - third), abs(tail - third))
    return worst


def integral_positivity(rng, dim_max):
    space = random_space(rng, dim_max)
    rho = random_state(rng, space)
    return max(-qz.quantum_integral(rho, random_rv(rng, space.size, "nonneg")), 0.0)


def integral_grade2(rng, dim_max):
    space = random_space(rng, dim_max)
    rho = random_state(rng, space)
    f = random_rv(rng, space.size)
    A, B, C = random_partition(rng, space.size, 3)
    I = lambda E: qz.integral_over(rho, f, E)  # noqa: E731
    return abs(I(A | B | C) - (I(A | B) + I(A | C) + I(B | C) - I(A) - I(B) - I(C)))


def mixture_linearity(rng, dim_max):
    space = random_space(rng, dim_max)
    r1, r2 = random_state(rng, space), random_state(rng, space)
    lam = rng.uniform()
    f = random_rv(rng, space.size)
    lhs = qz.quantum_integral(r1.mix(r2, lam), f)
    return abs(lhs - lam * qz.quantum_integral(r1, f) - (1 - lam) * qz.quantum_integral(r2, f))


# ---------------------------------------------------------------------------
# path systems
# ---------------------------------------------------------------------------


def _path_dims(dim_max):
    return min(3, max(dim_max, 1)), 4


def path_normalization(rng, dim_max):
    return random_ensemble(rng, *_path_dims(dim_max)).normalization_residual()


def path_class_products(rng, dim_max):
    sys, psi, n = random_system(rng, *_path_dims(dim_max))
    space = ps.PathSpace(sys.dim, n)
    ens = ps.build_ensemble(sys, psi, n)
    i, j = rng.integers(0, space.size), rng.integers(0, space.size)
    Ci = ps.class_operator(ens, space.explicit([space.digits(i)]))
    Cj = ps.class_operator(ens, space.explicit([space.digits(j)]))
    gi, gj = space.digits(i), space.digits(j)
    b = ens.transition_products
    expected = np.zeros((sys.dim, sys.dim), dtype=np.complex128)
    if gi[-1] == gj[-1]:
        expected[gj[0], gi[0]] = np.conj(b[j]) * b[i]
    return _diff(Cj.conj().T @ Ci, expected)


def path_pair_table(rng, dim_max):
    ens = random_ensemble(rng, *_path_dims(dim_max))
    space = ens.space
    i, j = rng.integers(0, space.size), rng.integers(0, space.size)
    a = ens.amplitudes
    expected = np.conj(a[j]) * a[i] * (ens.final_site[i] == ens.final_site[j])
    got = ps.path_decoherence(ens, space.explicit([space.digits(i)]), space.explicit([space.digits(j)]))
    herm = abs(got - np.conj(ps.path_decoherence(ens, space.explicit([space.digits(j)]), space.explicit([space.digits(i)]))))
    return max(abs(got - expected), herm)


def path_lowrank_vs_dense(rng, dim_max):
    ens = random_ensemble(rng, *_path_dims(dim_max))
    size = ens.space.size
    A, B = random_event(rng, size), random_event(rng, size)
    a = ens.amplitudes
    same = ens.final_site[:, None] == ens.final_site[None, :]
    table = np.conj(a)[None, :] * a[:, None] * same  # table[g, g'] = Delta_n(g, g')
    direct = complex(np.sum(table[np.ix_(A.mask, B.mask)]))
    return abs(ps.path_decoherence(ens, A, B) - direct)


def path_state(rng, dim_max):
    ens = random_ensemble(rng, *_path_dims(dim_max))
    rho = ps.dense_decoherence_matrix(ens)
    lam = hermitian_eig(rho).eigenvalues
    herm = float(np.linalg.norm(rho - rho.conj().T))
    rank_ok = int(np.sum(lam > 1e-10)) <= ens.system.dim
    trace = abs(np.trace(rho) - 1.0)
    return max(herm, -float(lam[0]), trace, ens.normalization_residual()) if rank_ok else math.inf


def path_grade2(rng, dim_max):
    ens = random_ensemble(rng, *_path_dims(dim_max))
    A, B, C = random_partition(rng, ens.space.size, 3)
    q = lambda E: ps.path_q_measure(ens, E)  # noqa: E731
    return abs(q(A | B | C) - (q(A | B) + q(A | C) + q(B | C) - q(A) - q(B) - q(C)))


def path_class_total(rng, dim_max):
    sys, psi, n = random_system(rng, min(4, max(dim_max, 1)), 5)
    ens = ps.build_ensemble(sys, psi, n)
    return _diff(ps.class_operator(ens, ens.space.everything()), ps.compose(sys, n, 0))


def path_cocycle(rng, dim_max):
    sys, _, n = random_system(rng, *_path_dims(dim_max))
    r = rng.integers(0, n + 1)
    s = rng.integers(r, n + 1)
    t = rng.integers(s, n + 1)
    U = ps.compose(sys, t, r)
    worst = max(_diff(U, ps.compose(sys, t, s) @ ps.compose(sys, s, r)), _diff(ps.compose(sys, r, r), np.eye(sys.dim)))
    return max(worst, ps.unitarity_residual(U) if U.size else 0.0)


def path_bridge(rng, dim_max):
    ens = random_ensemble(rng, min(2, max(dim_max, 1)), 4)
    size = ens.space.size
    low, high = ps.bridge_check(ens, random_event(rng, size), random_event(rng, size))
    return abs(low - high)


def path_workers(rng, dim_max):
    sys, psi, n = random_system(rng, *_path_dims(dim_max))
    k = rng.integers(2, 6)
    one = ps.build_ensemble(sys, psi, n, workers=1)
    many = ps.build_ensemble(sys, psi, n, workers=k)
    A = random_event(rng, one.space.size)
    return max(_diff(one.amplitudes, many.amplitudes), abs(ps.path_q_measure(one, A) - ps.path_q_measure(many, A)))


# ---------------------------------------------------------------------------
# registry and runner
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Family:
    name: str
    func: Callable[[SplitMix64, int], float]
    tol: float
    group: str


FAMILIES: tuple[Family, ...] = (
    Family("nu_additivity", nu_additivity, 1e-15, "finite_measure"),
    Family("chi_norm", chi_norm, EXACT, "finite_measure"),
    Family("cauchy_schwarz", cauchy_schwarz, EXACT, "finite_measure"),
    Family("expectation_bound", expectation_bound, EXACT, "finite_measure"),
    Family("simple_form_roundtrip", simple_form_roundtrip, 0.0, "finite_measure"),
    Family("embed_isometry", embed_isometry, 1e-13, "linalg_core"),
    Family("eig_invariants", eig_invariants, SPECTRAL, "linalg_core"),
    Family("trace_basis_free", trace_basis_free, SPECTRAL, "linalg_core"),
    Family("norm_is_spectral_radius", norm_is_spectral_radius, SPECTRAL, "linalg_core"),
    Family("adjoint_consistency", adjoint_consistency, EXACT, "linalg_core"),
    Family("d_additivity", d_additivity, EXACT, "qmeasure_ops"),
    Family("d_conjugate_symmetry", d_conjugate_symmetry, EXACT, "qmeasure_ops"),
    Family("d_square_law", d_square_law, EXACT, "qmeasure_ops"),
    Family("d_polar_laws", d_polar_laws, EXACT, "qmeasure_ops"),
    Family("gram_positivity", gram_positivity, SPECTRAL, "qmeasure_ops"),
    Family("mu_grade2", mu_grade2, EXACT, "qmeasure_ops"),
    Family("mu_rho_grade2", mu_rho_grade2, EXACT, "qmeasure_ops"),
    Family("interference_decomposition", interference_decomposition, EXACT, "qmeasure_ops"),
    Family("disjoint_product_zero", disjoint_product_zero, EXACT, "qmeasure_ops"),
    Family("null_iff", null_iff, 0.0, "qmeasure_ops"),
    Family("null_union_c", null_union_c, 1e-14, "qmeasure_ops"),
    Family("null_union_d", null_union_d, 0.0, "qmeasure_ops"),
    Family("functional_additivity", functional_additivity, EXACT, "qmeasure_ops"),
    Family("functional_bounds", functional_bounds, EXACT, "qmeasure_ops"),
    Family("gram_matrix_psd", gram_matrix_psd, SPECTRAL, "qmeasure_ops"),
    Family("norm_law", norm_law, SPECTRAL, "qmeasure_ops"),
    Family("continuity_d", continuity_d, SPECTRAL, "qmeasure_ops"),
    Family("continuity_mu", continuity_mu, SPECTRAL, "qmeasure_ops"),
    Family("quantize_positivity", quantize_positivity, SPECTRAL, "quantization"),
    Family("effect_bound", effect_bound, SPECTRAL, "quantization"),
    Family("quantize_norm_bound", quantize_norm_bound, EXACT, "quantization"),
    Family("quantize_homogeneity", quantize_homogeneity, EXACT, "quantization"),
    Family("quantize_grade2", quantize_grade2, SPECTRAL, "quantization"),
    Family("quantize_lipschitz", quantize_lipschitz, SPECTRAL, "quantization"),
    Family("sharp_events", sharp_events, EXACT, "quantization"),
    Family("oracle_agreement", oracle_agreement, SPECTRAL, "quantization"),
    Family("integral_positivity", integral_positivity, SPECTRAL, "quantization"),
    Family("integral_grade2", integral_grade2, SPECTRAL, "quantization"),
    Family("mixture_linearity", mixture_linearity, EXACT, "quantization"),
    Family("path_normalization", path_normalization, SPECTRAL, "path_system"),
    Family("path_class_products", path_class_products, EXACT, "path_system"),
    Family("path_pair_table", path_pair_table, 1e-14, "path_system"),
    Family("path_lowrank_vs_dense", path_lowrank_vs_dense, EXACT, "path_system"),
    Family("path_state", path_state, SPECTRAL, "path_system"),
    Family("path_grade2", path_grade2, SPECTRAL, "path_system"),
    Family("path_class_total", path_class_total, SPECTRAL, "path_system"),
    Family("path_cocycle", path_cocycle, EXACT, "path_system"),
    Family("path_bridge", path_bridge, SPECTRAL, "path_system"),
    Family("path_workers", path_workers, EXACT, "path_system"),
)

FAMILY_BY_NAME = {f.name: f for f in FAMILIES}


@dataclass
class FamilyResult:
    name: str
    group: str
    cases: int
    passed: int
    worst: float
    tol: float
    worst_case: int

    @property
    def ok(self) -> bool:
        return self.passed == self.cases


def run_family(family: Family | str, rng: SplitMix64, cases: int, dim_max: int, tol: float | None = None) -> FamilyResult:
    if isinstance(family, str):
        family = FAMILY_BY_NAME[family]
    tol = family.tol if tol is None else tol
    passed, worst, worst_case = 0, 0.0, 0
    for case in range(cases):
        res = float(family.func(rng.spawn(), dim_max))
        if math.isnan(res):
            res = math.inf
        if res <= tol:
            passed += 1
        if res > worst:
            worst, worst_case = res, case
    return FamilyResult(family.name, family.group, cases, passed, worst, tol, worst_case)


def run_suite(seed: int, cases: int, dim_max: int, tol: float | None = None, families=None) -> list[FamilyResult]:
    if cases < 1:
        raise ValueError("cases must be at least 1")
    root = SplitMix64(seed)
    chosen = FAMILIES if families is None else [FAMILY_BY_NAME[f] if isinstance(f, str) else f for f in families]
    # each family gets its own child stream so adding families never shifts others
    streams = {f.name: root.spawn() for f in FAMILIES}
    return [run_family(f, streams[f.name], cases, dim_max, tol) for f in chosen]
