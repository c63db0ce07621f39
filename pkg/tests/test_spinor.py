import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from symbreak.acceptance import brute_force_degeneracies
from symbreak.errors import ValidationError
from symbreak.numerics import Grid
from symbreak.spinor import (
    Branch,
    SpinorSystem,
    block_mismatch,
    commutator_audit,
    decompose,
    find_degeneracies,
    grid_spinor_spectrum,
    group_levels,
    reconstruction_residual,
    spinor_spectrum,
)

R2 = math.sqrt(2.0)
GOLDEN = (1 + math.sqrt(5)) / 2


def test_system_validation():
    with pytest.raises(ValidationError):
        SpinorSystem(0.0, 1.0)
    with pytest.raises(ValidationError):
        SpinorSystem(1.0, math.inf)


def test_spectrum_enumeration():
    levels = spinor_spectrum(SpinorSystem(R2, 1.0), 3.0)
    E = [lv.energy for lv in levels]
    np.testing.assert_allclose(E, [0, 0, 1, R2, 2, 2 * R2, 3], atol=1e-15)
    assert {lv.branch for lv in levels[:2]} == {Branch.PLUS, Branch.MINUS}


def test_spectrum_equal_frequencies_doubly_labelled():
    groups = group_levels(spinor_spectrum(SpinorSystem(1.3, 1.3), 10.0))
    assert all(len(members) == 2 for _, members in groups)


def test_spectrum_below_first_excitation():
    levels = spinor_spectrum(SpinorSystem(R2, 1.0), 0.5)
    assert [(lv.branch, lv.n) for lv in levels] == [(Branch.PLUS, 0), (Branch.MINUS, 0)]


@settings(max_examples=50, deadline=None)
@given(st.floats(0.1, 10), st.floats(0.1, 10), st.floats(0.1, 50))
def test_ground_degeneracy_universal(wp, wm, emax):
    zero = [lv for lv in spinor_spectrum(SpinorSystem(wp, wm), emax) if lv.energy == 0.0]
    assert len(zero) == 2


@pytest.mark.parametrize("ratio", [R2, GOLDEN])
def test_irrational_surrogates_have_no_coincidences(ratio):
    sysm = SpinorSystem(ratio, 1.0)
    found = find_degeneracies(sysm, 10_000, 1e-9)
    assert found == []
    assert brute_force_degeneracies(ratio, 1.0, 10_000, 1e-9) == []


def test_commensurate_example():
    found = find_degeneracies(SpinorSystem(3.0, 2.0), 10, 1e-12)
    assert [(d.n, d.m) for d in found] == [(2, 3), (4, 6), (6, 9)]
    assert [d.n * 3.0 for d in found] == [6.0, 12.0, 18.0]


def test_near_rational_detection():
    sysm = SpinorSystem(1 + 1e-12, 1.0)
    found = find_degeneracies(sysm, 1000, 1e-9)
    brute = brute_force_degeneracies(1 + 1e-12, 1.0, 1000, 1e-9)
    assert found and [(d.n, d.m) for d in found] == brute


@settings(max_examples=20, deadline=None)
@given(
    st.integers(1, 12),
    st.integers(1, 12),
    st.floats(0.2, 5.0),
    st.sampled_from([0.0, 1e-13, 1e-7]),
    st.sampled_from([1e-9, 1e-6, 1e-3]),
)
def test_find_degeneracies_equals_brute_force(p, q, scale, jitter, tol):
    # near-rational and generic ratios, both candidate routes
    wm = scale
    wp = scale * (p / q) * (1 + jitter)
    got = [(d.n, d.m) for d in find_degeneracies(SpinorSystem(wp, wm), 500, tol)]
    assert got == brute_force_degeneracies(wp, wm, 500, tol)


def test_find_degeneracies_random_pairs_equal_brute_force():
    rng = np.random.default_rng(20)
    for _ in range(20):
        wp, wm = rng.uniform(0.2, 5.0, size=2)
        got = [(d.n, d.m) for d in find_degeneracies(SpinorSystem(wp, wm), 500)]
        assert got == brute_force_degeneracies(wp, wm, 500, SpinorSystem(wp, wm).default_tol)


def test_find_degeneracies_validation():
    with pytest.raises(ValidationError):
        find_degeneracies(SpinorSystem(1, 2), 0)
    with pytest.raises(ValidationError):
        find_degeneracies(SpinorSystem(1, 2), 10, tol=-1.0)


def test_decomposition_constants():
    d = decompose(SpinorSystem(R2, 1.0))
    assert d.omega0 == pytest.approx(math.sqrt(1.5), rel=1e-15)
    assert d.omega_delta_sq == pytest.approx(0.5, rel=1e-15)
    assert d.eps0 == pytest.approx((R2 + 1) / 4, rel=1e-15)
    assert d.eps_delta == pytest.approx((R2 - 1) / 4, rel=1e-15)
    assert decompose(SpinorSystem(1.0, 2.0)).omega_delta_sq == -1.5


def test_decomposition_equal_frequencies():
    d = decompose(SpinorSystem(1.7, 1.7))
    assert d.omega_delta_sq == 0.0 and d.eps_delta == 0.0
    assert np.all(d.u(np.linspace(-3, 3, 11)) == 0.0)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.05, 20), st.floats(0.05, 20), st.floats(0.1, 3), st.floats(0.1, 3))
def test_reconstruction_identities(wp, wm, hbar, m):
    sysm = SpinorSystem(wp, wm, hbar, m)
    d = decompose(sysm)
    assert d.omega0**2 + d.omega_delta_sq == pytest.approx(wp**2, rel=1e-12)
    assert d.omega0**2 - d.omega_delta_sq == pytest.approx(wm**2, rel=1e-12)
    assert d.eps0 + d.eps_delta == pytest.approx(hbar * wp / 2, rel=1e-12)
    assert d.eps0 - d.eps_delta == pytest.approx(hbar * wm / 2, rel=1e-12)


def test_reconstruction_residual_and_negative_control():
    sysm = SpinorSystem(R2, 1.0)
    g = Grid(-6, 6, 1201)
    assert reconstruction_residual(sysm, g) <= 1e-10
    dp, dm = block_mismatch(sysm, g, as_printed=True)
    np.testing.assert_allclose(dp, R2 / 2, atol=1e-10)
    np.testing.assert_allclose(dm, 0.5, atol=1e-10)
    assert reconstruction_residual(sysm, g, as_printed=True) == pytest.approx(R2 / 2, abs=1e-10)


def test_reconstruction_equal_frequencies_quadratic_part():
    sysm = SpinorSystem(1.2, 1.2)
    g = Grid(-4, 4, 401)
    for printed in (False, True):
        dp, dm = block_mismatch(sysm, g, as_printed=printed)
        # only a constant offset can remain; the x-dependent part cancels
        assert np.ptp(dp) <= 1e-10 and np.ptp(dm) <= 1e-10
    assert reconstruction_residual(sysm, g) <= 1e-10


def test_commutator_audit():
    sysm = SpinorSystem(R2, 1.0)
    g = Grid(-5, 5, 301)
    assert commutator_audit(sysm, g, trials=10).max_norm <= 1e-12
    eps = 0.1
    assert commutator_audit(sysm, g, trials=10, coupling=eps).max_norm >= eps
    assert commutator_audit(sysm, g, 1, seed=7) == commutator_audit(sysm, g, 1, seed=7)
    with pytest.raises(ValidationError):
        commutator_audit(sysm, g, trials=0)


def test_grid_spectrum():
    sysm = SpinorSystem(R2, 1.0)
    levels = grid_spinor_spectrum(sysm, Grid(-10, 10, 2000), 6)
    for lv in levels:
        assert abs(lv.energy - lv.n * sysm.omega(lv.branch)) < 1e-3
    plus = sorted(lv.energy for lv in levels if lv.branch is Branch.PLUS)
    np.testing.assert_allclose(np.diff(plus), R2, atol=1e-3)
    # no cross-branch coincidence below 5 other than the ground pair
    low = [lv for lv in levels if 0.5 < lv.energy < 5.0]
    assert all(
        abs(a.energy - b.energy) > 1e-2 for a in low for b in low if a.branch is not b.branch
    )
    assert find_degeneracies(sysm, 5) == []
