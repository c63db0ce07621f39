import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from symbreak.doublewell import (
    WellLevel,
    WellParams,
    assemble_wavefunction,
    infinite_barrier_states,
    levels_below_barrier,
    limit_levels,
    matching_jumps,
    matching_residual,
    parity_gap_sweep,
    squared_condition,
    threshold_alpha,
)
from symbreak.errors import MatchingMismatch, OutOfRange, ValidationError
from symbreak.numerics import Grid, inner_product
from symbreak.qm1d import Parity, PiecewiseDoubleWell, classify_parity, solve_spectrum

P200 = WellParams(2.0, 0.5, 200.0)


def grid_levels(alpha, a=2.0, b=0.5, n=4000, k=None):
    V = PiecewiseDoubleWell(alpha, a, b)
    k = k or len(levels_below_barrier(WellParams(a, b, alpha)))
    return solve_spectrum(V, V.box(n), k, split_parity=True)


def test_params_validation():
    with pytest.raises(ValidationError):
        WellParams(1.0, 1.0, 10.0)
    with pytest.raises(ValidationError):
        WellParams(2.0, 0.5, -1.0)
    assert not WellParams(2.0, 0.5).finite


def test_residual_domain():
    with pytest.raises(OutOfRange):
        matching_residual(200.0, Parity.EVEN, P200)
    with pytest.raises(OutOfRange):
        matching_residual(0.0, Parity.EVEN, P200)
    with pytest.raises(ValidationError):
        matching_residual(1.0, Parity.EVEN, WellParams(2.0, 0.5))


def test_residual_near_barrier_top():
    E = 200.0 * (1 - 1e-12)
    k = P200.k(E)
    assert matching_residual(E, Parity.EVEN, P200) == pytest.approx(k / math.tan(k * 1.5), rel=1e-5)
    assert matching_residual(E, Parity.ODD, P200) == pytest.approx(k / math.tan(k * 1.5) + 1 / 0.5, rel=1e-5)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.01, 199.0))
def test_odd_residual_exceeds_even(E):
    assert matching_residual(E, Parity.ODD, P200) > matching_residual(E, Parity.EVEN, P200)


def test_lowest_pair():
    lv = levels_below_barrier(P200, n_max=1)
    assert [l.parity for l in lv] == [Parity.EVEN, Parity.ODD]
    assert abs(lv[1].energy - lv[0].energy) < 1e-2
    # below the infinite-barrier value pi^2/(2*1.5^2), within 10 %
    ref = math.pi**2 / (2 * 1.5**2)
    assert 0.9 * ref < lv[0].energy < ref


def test_roots_match_grid_oracle_and_residual_small():
    roots = levels_below_barrier(P200)
    spec = grid_levels(200.0)
    assert len(roots) == 20
    for r, g in zip(roots, spec.levels):
        assert r.parity == g.parity
        assert abs(r.energy - g.energy) < 1e-2
        assert r.below_barrier and 0 < r.energy < 200
    # the grid eigenvalue is a near-root: |g(E_grid)| small against the slope scale
    E = spec.levels[0].energy
    assert abs(matching_residual(E, Parity.EVEN, P200)) < 1e-2 * abs(
        matching_residual(1.0, Parity.EVEN, P200) - matching_residual(3.0, Parity.EVEN, P200)
    )


@pytest.mark.parametrize("alpha", [5.0, 20.0, 60.0])
def test_oracle_equivalence_other_heights(alpha):
    roots = levels_below_barrier(WellParams(2.0, 0.5, alpha))
    spec = grid_levels(alpha)
    assert [r.parity for r in roots] == [g.parity for g in spec.levels]
    np.testing.assert_allclose([r.energy for r in roots], spec.energies, atol=1e-2)


@pytest.mark.parametrize("alpha", [3.0, 10.0, 50.0, 200.0, 400.0])
def test_even_below_odd_and_squared_form(alpha):
    p = WellParams(2.0, 0.5, alpha)
    levels = levels_below_barrier(p)
    pairs = {}
    for lv in levels:
        pairs.setdefault(lv.n, {})[lv.parity] = lv.energy
        assert squared_condition(lv.energy, lv.parity, p) < 1e-9
    for pr in pairs.values():
        if len(pr) == 2:
            assert pr[Parity.EVEN] < pr[Parity.ODD]


def test_unresolved_pairs_still_ordered():
    # at alpha = 1000 the splitting is below one ulp; roots may coincide but never invert
    levels = levels_below_barrier(WellParams(2.0, 0.5, 1000.0), n_max=3)
    for even, odd in zip(levels[::2], levels[1::2]):
        assert (even.parity, odd.parity) == (Parity.EVEN, Parity.ODD)
        assert even.energy <= odd.energy
    (entry,) = parity_gap_sweep([1000.0], 1, 2.0, 0.5)
    assert entry.gap > 0


def test_no_levels_below_threshold():
    assert levels_below_barrier(WellParams(2.0, 0.5, 0.1)) == []
    # grid oracle: the ground level lies above the barrier
    assert grid_levels(0.1, k=1).energies[0] > 0.1


def test_limit_levels():
    assert limit_levels(2, 1, n=1) == pytest.approx(math.pi**2 / 2, rel=1e-14)
    assert limit_levels(2, 1, n=2) == pytest.approx(2 * math.pi**2, rel=1e-14)
    for n in range(1, 8):
        assert limit_levels(2, 1, n=n) / limit_levels(2, 1, n=1) == pytest.approx(n * n, rel=1e-14)
    assert limit_levels(2, 1, n=3) == pytest.approx(limit_levels(3, 2, n=3), rel=1e-14)
    with pytest.raises(ValidationError):
        limit_levels(2, 1, n=0)


def test_limit_convergence():
    roots = levels_below_barrier(WellParams(2.0, 0.5, 1e6), n_max=2)
    for lv in roots:
        ref = limit_levels(2.0, 0.5, n=lv.n)
        assert abs(lv.energy - ref) / ref < 1e-3


def test_threshold_closed_form_and_dichotomy():
    a0 = threshold_alpha(2.0, 0.5)
    # at the threshold the even ground state has kappa = 0: k (a - b) = pi/2
    assert a0 == pytest.approx(math.pi**2 / (8 * 1.5**2), rel=1e-9)
    assert levels_below_barrier(WellParams(2.0, 0.5, 0.9 * a0)) == []
    assert levels_below_barrier(WellParams(2.0, 0.5, 1.1 * a0)) != []
    assert threshold_alpha(3.0, 0.5) < a0


def test_assembled_state():
    lv = levels_below_barrier(P200, n_max=2)
    g = Grid(-2, 2, 4000)
    spec = grid_levels(200.0, k=4)
    for level, grid_level in zip(lv, spec.levels):
        jv, js = matching_jumps(level, P200)
        assert jv < 1e-8 and js < 1e-8
        psi = assemble_wavefunction(level, P200, g)
        assert psi.values[0] == 0.0 and psi.values[-1] == 0.0
        assert inner_product(psi, psi) == pytest.approx(1.0, abs=1e-12)
        assert abs(inner_product(psi, grid_level.state)) >= 0.999
        assert classify_parity(psi).parity is level.parity


def test_assemble_rejects_non_root():
    with pytest.raises(MatchingMismatch):
        assemble_wavefunction(WellLevel(1, Parity.EVEN, 3.0, True), P200, Grid(-2, 2, 101))


def test_infinite_barrier_states():
    g = Grid(-2, 2, 4001)
    s = infinite_barrier_states(1, 2.0, 0.5, g)
    assert inner_product(s.psi_L, s.psi_R) == 0.0
    assert classify_parity(s.psi_plus).parity is Parity.EVEN
    assert classify_parity(s.psi_minus).parity is Parity.ODD
    # basis freedom: back-transform reproduces the well states
    r2 = math.sqrt(2)
    np.testing.assert_allclose((s.psi_plus.values + s.psi_minus.values) / r2, s.psi_L.values, atol=1e-12)
    np.testing.assert_allclose((s.psi_plus.values - s.psi_minus.values) / r2, s.psi_R.values, atol=1e-12)


def test_infinite_barrier_states_as_printed_swaps_parity():
    s = infinite_barrier_states(1, 2.0, 0.5, Grid(-2, 2, 801), as_printed=True)
    assert classify_parity(s.psi_plus).parity is Parity.ODD
    assert classify_parity(s.psi_minus).parity is Parity.EVEN


def _mp_gap(alpha, a=2, b=0.5, dps=120):
    # independent oracle: both roots of pair 1 at high precision
    with mpmath.workdps(dps):
        L = mpmath.mpf(a) - b
        alpha = mpmath.mpf(alpha)

        def g(E, odd):
            k = mpmath.sqrt(2 * E)
            kap = mpmath.sqrt(2 * (alpha - E))
            t = mpmath.coth(kap * b) if odd else mpmath.tanh(kap * b)
            return k * mpmath.cot(k * L) + kap * t

        lo, hi = mpmath.mpf("1e-6"), (mpmath.pi / L) ** 2 / 2 * (1 - mpmath.mpf("1e-30"))
        hi = min(hi, alpha * (1 - mpmath.mpf("1e-30")))
        roots = [mpmath.findroot(lambda E: g(E, odd), (lo, hi), solver="anderson") for odd in (False, True)]
        return float(roots[1] - roots[0])


@pytest.mark.parametrize("alpha", [50.0, 200.0, 1e4])
def test_gap_against_high_precision_oracle(alpha):
    (entry,) = parity_gap_sweep([alpha], 1, 2.0, 0.5)
    ref = _mp_gap(alpha)
    assert entry.gap == pytest.approx(ref, rel=1e-6)


def test_gap_sweep_monotone_and_positive():
    sweep = parity_gap_sweep([50.0, 200.0, 800.0, 1e4], 1, 2.0, 0.5)
    gaps = [e.gap for e in sweep]
    assert all(g > 0 for g in gaps)
    assert gaps == sorted(gaps, reverse=True) and len(set(gaps)) == 4
    assert gaps[3] < gaps[0] / 10


def test_gap_sweep_missing_pair():
    (entry,) = parity_gap_sweep([0.1], 1, 2.0, 0.5)
    assert entry.missing and entry.gap is None
