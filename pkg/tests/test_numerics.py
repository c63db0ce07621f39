import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from symbreak.errors import GridMismatch, MaxIterations, NonFinite, NoSignChange, ValidationError
from symbreak.numerics import (
    Grid,
    PhaseState,
    TabulatedState,
    TridiagonalOperator,
    best_rational_approximations,
    eig_sym_tridiag,
    find_root_bracketed,
    inner_product,
    integrate_hamiltonian,
)


# -- Grid ------------------------------------------------------------------


def test_grid_spacing_and_endpoints():
    g = Grid(-1.0, 2.0, 7)
    assert g.dx == 0.5
    assert g.x[0] == -1.0 and g.x[-1] == 2.0
    np.testing.assert_allclose(np.diff(g.x), 0.5, rtol=0, atol=1e-15)


@pytest.mark.parametrize("args", [(1.0, 0.0, 10), (0.0, 1.0, 2), (0.0, math.inf, 10), (0.0, 1.0, 3.5)])
def test_grid_rejects_invalid(args):
    with pytest.raises(ValidationError):
        Grid(*args)


def test_tabulated_state_rejects_wrong_length_and_nonfinite():
    g = Grid(0, 1, 5)
    with pytest.raises(ValidationError):
        TabulatedState(g, np.zeros(4))
    with pytest.raises(ValidationError):
        TabulatedState(g, [0, 1, np.nan, 0, 0])


# -- root finding ------------------------------------------------------------


def test_root_sqrt2():
    r = find_root_bracketed(lambda x: x * x - 2, 1.0, 2.0, 1e-12)
    assert abs(r - math.sqrt(2)) < 1e-12


def test_root_cos():
    r = find_root_bracketed(math.cos, 0.0, 2.0, 1e-12)
    assert abs(r - math.pi / 2) < 1e-12


def test_root_reversed_bracket_and_exact_endpoint():
    assert abs(find_root_bracketed(lambda x: x - 0.3, 1.0, 0.0) - 0.3) < 1e-12
    assert find_root_bracketed(lambda x: x, 0.0, 1.0) == 0.0


def test_root_no_sign_change():
    with pytest.raises(NoSignChange):
        find_root_bracketed(lambda x: x * x + 1, -1.0, 1.0)


def test_root_pole_is_not_reported_as_root():
    # tan changes sign across its pole at pi/2
    with pytest.raises(MaxIterations):
        find_root_bracketed(math.tan, 1.0, 2.0, 1e-12)


@settings(max_examples=60, deadline=None)
@given(
    st.floats(-5, 5),
    st.floats(0.01, 3),
    st.floats(0.01, 3),
    st.sampled_from([1, 3, 5]),
)
def test_root_property_sign_change_near_result(c, left, right, power):
    # f(x) = (x - c)**power (1 + (x - c)**2): single root c, odd multiplicity
    f = lambda x: (x - c) ** power * (1 + (x - c) ** 2)
    tol = 1e-10
    r = find_root_bracketed(f, c - left, c + right, tol)
    assert f(r - tol) * f(r + tol) <= 0 or f(r) == 0


# -- eigensolver -------------------------------------------------------------


def test_eig_2x2():
    w, v = eig_sym_tridiag(TridiagonalOperator([2.0, 2.0], [-1.0]), 2)
    np.testing.assert_allclose(w, [1.0, 3.0], atol=1e-14)
    np.testing.assert_allclose(np.linalg.norm(v, axis=0), 1.0, atol=1e-14)


def test_eig_1x1():
    w, v = eig_sym_tridiag(TridiagonalOperator([5.0], []), 1, want_vectors=False)
    assert w.tolist() == [5.0] and v is None


def test_eig_unit_box_laplacian():
    n = 2000
    dx = 1.0 / (n - 1)
    t = 1.0 / (2 * dx * dx)
    op = TridiagonalOperator(np.full(n - 2, 2 * t), np.full(n - 3, -t))
    w, _ = eig_sym_tridiag(op, 1, want_vectors=False)
    assert abs(w[0] - math.pi**2 / 2) / (math.pi**2 / 2) < 5e-3


def test_eig_rejects_bad_k():
    op = TridiagonalOperator([1.0, 2.0], [0.5])
    with pytest.raises(ValidationError):
        eig_sym_tridiag(op, 3)
    with pytest.raises(ValidationError):
        eig_sym_tridiag(op, 0)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 40), st.integers(0, 2**31 - 1), st.floats(-50, 50))
def test_eig_matches_dense_and_shifts(n, seed, c):
    rng = np.random.default_rng(seed)
    d, e = rng.normal(size=n), rng.normal(size=n - 1)
    op = TridiagonalOperator(d, e)
    k = max(1, n // 2)
    w, v = eig_sym_tridiag(op, k)
    assert np.all(np.diff(w) >= 0)
    np.testing.assert_allclose(w, np.linalg.eigvalsh(op.to_dense())[:k], atol=1e-10)
    for j in range(k):
        assert np.linalg.norm(op.matvec(v[:, j]) - w[j] * v[:, j]) <= 1e-8 * op.norm()
    ws, _ = eig_sym_tridiag(TridiagonalOperator(d + c, e), k, want_vectors=False)
    np.testing.assert_allclose(ws, w + c, atol=1e-10)


# -- integrator ----------------------------------------------------------------


def test_harmonic_final_state():
    xs, ps = integrate_hamiltonian(lambda x: -x, 1.0, PhaseState(1.0, 0.0), 1e-3, 10_000)
    assert len(xs) == len(ps) == 10_001
    assert abs(xs[-1] - math.cos(10)) < 1e-4
    assert abs(ps[-1] + math.sin(10)) < 1e-4


def test_free_particle():
    xs, ps = integrate_hamiltonian(lambda x: 0.0 * x, 1.0, PhaseState(0.0, 1.0), 0.1, 50)
    np.testing.assert_allclose(xs, 0.1 * np.arange(51), atol=1e-12)
    np.testing.assert_allclose(ps, 1.0)


@pytest.mark.parametrize("scheme", ["mclachlan", "leapfrog"])
def test_harmonic_energy_conservation(scheme):
    xs, ps = integrate_hamiltonian(lambda x: -x, 1.0, PhaseState(1.0, 0.0), 1e-3, 10_000, scheme=scheme)
    H = 0.5 * ps**2 + 0.5 * xs**2
    assert np.max(np.abs(H - 0.5)) / 0.5 < 1e-6


def test_sombrero_energy_conservation():
    f = lambda x: 2 * x - 4 * x**3
    x0 = math.sqrt((1 + math.sqrt(3)) / 2)  # turning point of E = 0.5
    xs, ps = integrate_hamiltonian(f, 1.0, PhaseState(x0, 0.0), 1e-3, 10_000)
    H = 0.5 * ps**2 + xs**4 - xs**2
    assert np.max(np.abs(H - 0.5)) / 0.5 < 1e-6


@pytest.mark.parametrize("scheme", ["mclachlan", "leapfrog"])
def test_integrator_second_order(scheme):
    T = 2.0
    errs = []
    for dt in (0.02, 0.01):
        xs, _ = integrate_hamiltonian(lambda x: -x, 1.0, PhaseState(1.0, 0.0), dt, int(round(T / dt)), scheme=scheme)
        errs.append(abs(xs[-1] - math.cos(T)))
    assert 3.5 < errs[0] / errs[1] < 4.5


def test_time_reversal():
    f = lambda x: 2 * x - 4 * x**3
    xs, ps = integrate_hamiltonian(f, 1.0, PhaseState(0.3, 0.4), 1e-3, 10_000)
    xb, pb = integrate_hamiltonian(f, 1.0, PhaseState(xs[-1], -ps[-1]), 1e-3, 10_000)
    assert abs(xb[-1] - 0.3) < 1e-6 and abs(-pb[-1] - 0.4) < 1e-6


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_integrator_blowup_raises():
    with pytest.raises(NonFinite):
        integrate_hamiltonian(lambda x: x**3, 1.0, PhaseState(10.0, 0.0), 0.1, 1000)


def test_integrator_validation():
    with pytest.raises(ValidationError):
        integrate_hamiltonian(lambda x: -x, 1.0, PhaseState(0, 1), -1e-3, 10)
    with pytest.raises(ValidationError):
        integrate_hamiltonian(lambda x: -x, 0.0, PhaseState(0, 1), 1e-3, 10)
    with pytest.raises(NonFinite):
        PhaseState(math.nan, 0.0)


# -- quadrature ----------------------------------------------------------------


def test_inner_product_constant():
    g = Grid(0, 1, 3)
    one = g.sample(np.ones_like)
    assert inner_product(one, one) == pytest.approx(1.0, abs=1e-15)


def test_inner_product_sin():
    g = Grid(0, math.pi, 2001)
    s = g.sample(np.sin)
    assert abs(inner_product(s, s) - math.pi / 2) < 1e-6


def test_inner_product_quartic_gaussian_against_quad():
    g = Grid(-4, 4, 4001)
    f = g.sample(lambda x: np.exp(-(x**4)))
    ref, _ = quad(lambda x: math.exp(-2 * x**4), -4, 4, epsabs=1e-13)
    assert abs(inner_product(f, f) - ref) < 1e-6


def test_inner_product_grid_mismatch():
    with pytest.raises(GridMismatch):
        inner_product(Grid(0, 1, 5).sample(np.sin), Grid(0, 1, 6).sample(np.sin))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-1e3, 1e3).filter(lambda v: v == 0 or abs(v) > 1e-100), min_size=3, max_size=30))
def test_inner_product_nonnegative(vals):
    g = Grid(0, 1, len(vals))
    f = TabulatedState(g, vals)
    ip = inner_product(f, f)
    assert ip >= 0
    assert (ip == 0) == (not np.any(vals))


# -- continued fractions ---------------------------------------------------------


def test_sqrt2_convergents():
    approx = best_rational_approximations(math.sqrt(2), 100)
    fracs = {(r.p, r.q) for r in approx if r.convergent}
    assert {(3, 2), (7, 5), (17, 12), (41, 29), (99, 70)} <= fracs
    assert all(r.q <= 100 for r in approx)


def test_half_terminates():
    approx = best_rational_approximations(0.5, 10)
    assert (approx[-1].p, approx[-1].q, approx[-1].error) == (1, 2, 0.0)


def test_pi_final_convergent():
    approx = [r for r in best_rational_approximations(math.pi, 120) if r.convergent]
    assert (approx[-1].p, approx[-1].q) == (355, 113)


def test_best_approximation_is_last():
    # the last entry is the best p/q with q <= q_max, as Fraction.limit_denominator finds it
    for x, qm in [(math.sqrt(2), 100), (math.pi, 50), (0.61803398875, 30)]:
        last = best_rational_approximations(x, qm)[-1]
        ref = Fraction(x).limit_denominator(qm)
        assert (last.p, last.q) == (ref.numerator, ref.denominator)


@settings(max_examples=80, deadline=None)
@given(st.floats(0.001, 1000), st.integers(1, 10_000))
def test_convergent_properties(x, q_max):
    for r in best_rational_approximations(x, q_max):
        assert math.gcd(r.p, r.q) == 1 and 1 <= r.q <= q_max
        assert r.error == pytest.approx(abs(x - r.p / r.q), abs=1e-14 * max(x, 1.0))
        if r.convergent:
            assert abs(Fraction(x) - Fraction(r.p, r.q)) < Fraction(1, r.q * r.q)


def test_rational_validation():
    with pytest.raises(ValidationError):
        best_rational_approximations(-1.0, 10)
    with pytest.raises(ValidationError):
        best_rational_approximations(1.5, 0)
