import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from q4nl import (FieldState, StepPlan, SystemParams, h2_distance,
                  h2_norm_total, integrate, make_initial)
from q4nl.scattering import (admissible_pair, check_exponents, decay_series,
                             extract_scattering_state, gn_localized_ratio,
                             pair_from_p, spacetime_norm, sup_cube_mass,
                             wave_operator, wave_operator_round_trip)

import oracles


# -- exponent flags ------------------------------------------------------------

def test_exponent_examples_from_theory():
    c = check_exponents(3, 1.0, 1)
    assert c.pd == 3.0 and not c.scattering_ok and c.decay_ok
    c = check_exponents(5, 3.0, 1)
    assert c.p_star == 4.0 and c.scattering_ok
    c = check_exponents(4, 2.0, 1)
    assert c.p_star == math.inf and c.scattering_ok
    c = check_exponents(3, 2.0, 1)
    assert c.scattering_ok  # pd = 6 > 4


def test_exponents_never_throw():
    for d in range(1, 12):
        for p in (-1.0, 0.0, 0.5, 1.0, 10.0):
            chk = check_exponents(d, p, 2)
            assert isinstance(chk.decay_ok, bool)


def test_coupled_system_needs_p_ge_1():
    assert not check_exponents(5, 0.9, 2).scattering_ok  # pd = 4.5 but p < 1
    assert check_exponents(5, 0.9, 1).scattering_ok      # single equation OK


def test_out_of_range_dimension_flags_false():
    c = check_exponents(9, 2.0, 1)
    assert not c.in_theorem_range and not c.decay_ok and not c.scattering_ok


@settings(max_examples=60, deadline=None)
@given(d=st.integers(3, 8), below=st.booleans(), n_comp=st.integers(1, 3))
def test_crossing_mass_supercritical_flips_only_scattering(d, below, n_comp):
    p_star = check_exponents(d, 1.0, 1).p_star
    p = 4.0 / d * (0.9 if below else 1.1)
    if n_comp > 1:
        p = max(p, 1.0 + (0.0 if below else 1e-6))  # keep the lower bound satisfied
    if p >= p_star:
        return
    chk = check_exponents(d, p, n_comp)
    assert chk.decay_ok
    if below and p * d < 4:
        assert not chk.scattering_ok
    if p * d > 4:
        assert chk.scattering_ok


# -- admissibility ---------------------------------------------------------------

def test_admissible_examples():
    assert admissible_pair(math.inf, 2, 5)
    assert not admissible_pair(2, math.inf, 4)   # the excluded endpoint
    assert admissible_pair(4, 6, 3)              # pair_from_p(2, 3)
    assert not admissible_pair(1.5, 4, 3)        # q < 2


def test_pair_from_p_example():
    q, r = pair_from_p(1, 4)
    assert (q, r) == (Fraction(4), Fraction(4))
    assert Fraction(4) / q + Fraction(4) / r == Fraction(4, 2)


def test_pair_from_p_exhaustive_rational():
    for n in range(3, 9):
        p_star = math.inf if n in (3, 4) else Fraction(4, n - 4)
        for p in (Fraction(1), Fraction(3, 2), Fraction(2), Fraction(3)):
            if p_star != math.inf and p >= p_star:
                continue
            q, r = pair_from_p(p, n)
            assert Fraction(4) / q + Fraction(n) / r == Fraction(n, 2)
            assert q >= 2 and r >= 2


def test_pair_from_p_rejects_supercritical():
    with pytest.raises(ValueError):
        pair_from_p(3, 8)  # p_star(8) = 1


# -- decay -------------------------------------------------------------------------

def test_decay_series_free_packet_decreasing(grid1d):
    s = SystemParams(N=1, p=2.0, kappa=1, beta=np.zeros((1, 1)), lam=np.zeros((1, 1)))
    st0 = make_initial("gaussian_packet", {"amplitude": 1.0, "sigma": 2.0},
                       grid1d, s, seed=0)
    samples = []
    integrate(st0, grid1d, s, StepPlan.for_horizon(0.5, 5e-3, 10),
              lambda k, state: samples.append(state))
    ds = decay_series(samples, grid1d, s, [4.0])
    series = ds.norms[4.0]
    assert np.all(np.diff(series) < 0)
    np.testing.assert_allclose(series, ds.free_norms[4.0], rtol=1e-10)
    assert ds.tail_slopes[4.0] < 0


def test_decay_rejects_q2(grid1d, single_sys, gaussian1d):
    with pytest.raises(ValueError):
        decay_series([gaussian1d], grid1d, single_sys, [2.0])


def test_decay_zero_field(grid1d, single_sys):
    zero = [FieldState(t, np.zeros((1, 256), dtype=complex)) for t in (0.0, 0.1)]
    ds = decay_series(zero, grid1d, single_sys, [4.0])
    assert np.all(ds.norms[4.0] == 0.0)


# -- localized Gagliardo-Nirenberg ----------------------------------------------------

def test_gn_zero_field(grid1d):
    st = FieldState(0.0, np.zeros((1, 256), dtype=complex))
    assert gn_localized_ratio(st, grid1d) == 0.0


def test_gn_translation_invariance(grid1d, single_sys):
    a = make_initial("gaussian_packet", {"amplitude": 1.0, "sigma": 1.0},
                     grid1d, single_sys, seed=0)
    shift = int(round(4.0 / grid1d.h))
    b = FieldState(0.0, np.roll(a.u, shift, axis=1))
    assert gn_localized_ratio(a, grid1d) == pytest.approx(
        gn_localized_ratio(b, grid1d), rel=1e-12)


def test_gn_rescaled_family_bounded(grid1d, single_sys):
    ratios = []
    for sigma in (0.5, 0.8, 1.2, 2.0):
        st = make_initial("gaussian_packet", {"amplitude": 1.0, "sigma": sigma},
                          grid1d, single_sys, seed=0)
        ratios.append(gn_localized_ratio(st, grid1d))
    assert all(0 < r < 10.0 for r in ratios)  # common constant, reported not pinned


def test_gn_cube_side_validation(grid1d, gaussian1d):
    with pytest.raises(ValueError):
        gn_localized_ratio(gaussian1d, grid1d, side=100.0)


def test_sup_cube_mass_matches_direct(grid1d, single_sys):
    st = make_initial("gaussian_packet", {"amplitude": 1.0, "sigma": 1.0,
                                          "center": [2.5]}, grid1d, single_sys, seed=0)
    dens = np.abs(st.u[0]) ** 2
    windowed = sup_cube_mass(st, grid1d, side=1.0)
    best = max(oracles.cube_mass_direct(dens, grid1d.axis_coords, grid1d.h, (i,), 1.0)
               for i in range(0, grid1d.n, 4))
    assert windowed == pytest.approx(np.sqrt(best), rel=1e-9)


# -- scattering extraction -------------------------------------------------------------

def _free_checkpoints(grid, sys, state0, times, dt):
    state, out, t_now = state0, [], 0.0
    for t in times:
        state = integrate(state, grid, sys, StepPlan.for_horizon(t - t_now, dt, 10**9))
        t_now = state.t
        out.append(state)
    return out


def test_extract_free_flow_recovers_initial(grid1d):
    s = SystemParams(N=1, p=2.0, kappa=1, beta=np.zeros((1, 1)), lam=np.zeros((1, 1)))
    st0 = make_initial("gaussian_packet", {"amplitude": 1.0, "sigma": 2.0},
                       grid1d, s, seed=0)
    cks = _free_checkpoints(grid1d, s, st0, [0.05, 0.1, 0.2], 0.0125)
    rep = extract_scattering_state(cks, grid1d, s)
    assert rep.cauchy.max() < 1e-12
    assert h2_distance(rep.u0_plus, st0, grid1d) < 1e-12 * h2_norm_total(st0, grid1d)


def test_extract_zero_field(grid1d, single_sys):
    cks = [FieldState(t, np.zeros((1, 256), dtype=complex)) for t in (0.1, 0.2, 0.4)]
    rep = extract_scattering_state(cks, grid1d, single_sys)
    assert rep.cauchy.max() == 0.0
    assert h2_norm_total(rep.u0_plus, grid1d) == 0.0


def test_extract_needs_three_clean_checkpoints(grid1d, single_sys):
    # contaminated checkpoints are excluded, leaving too few
    u = np.ones((1, 256), dtype=complex)  # constant field: boundary fraction ~ 27/256
    cks = [FieldState(t, u) for t in (0.1, 0.2, 0.4)]
    with pytest.raises(ValueError):
        extract_scattering_state(cks, grid1d, single_sys, boundary_threshold=1e-8)


def test_extract_requires_increasing_times(grid1d, single_sys, gaussian1d):
    cks = [FieldState(t, gaussian1d.u) for t in (0.4, 0.2, 0.1)]
    with pytest.raises(ValueError):
        extract_scattering_state(cks, grid1d, single_sys)


# -- wave operator ----------------------------------------------------------------------

def test_wave_operator_free_identity(grid1d):
    s = SystemParams(N=1, p=2.0, kappa=1, beta=np.zeros((1, 1)), lam=np.zeros((1, 1)))
    u0p = make_initial("gaussian_packet", {"amplitude": 0.8, "sigma": 2.0},
                       grid1d, s, seed=0)
    u0 = wave_operator(u0p, 0.5, grid1d, s, 0.025)
    assert h2_distance(u0, u0p, grid1d) < 1e-12 * h2_norm_total(u0p, grid1d)


def test_wave_operator_gauge_linearity_free(grid1d):
    s = SystemParams(N=1, p=2.0, kappa=1, beta=np.zeros((1, 1)), lam=np.zeros((1, 1)))
    u0p = make_initial("gaussian_packet", {"amplitude": 0.8, "sigma": 2.0},
                       grid1d, s, seed=0)
    theta = 1.1
    rotated = FieldState(0.0, np.exp(1j * theta) * u0p.u)
    a = wave_operator(rotated, 0.5, grid1d, s, 0.025)
    b = wave_operator(u0p, 0.5, grid1d, s, 0.025)
    assert np.abs(a.u - np.exp(1j * theta) * b.u).max() < 1e-12


def test_wave_operator_round_trip_free_exact(grid1d):
    s = SystemParams(N=1, p=2.0, kappa=1, beta=np.zeros((1, 1)), lam=np.zeros((1, 1)))
    u0p = make_initial("gaussian_packet", {"amplitude": 0.8, "sigma": 2.0},
                       grid1d, s, seed=0)
    rep = wave_operator_round_trip(u0p, 0.5, grid1d, s, 0.025)
    assert rep.roundtrip_error < 1e-12


def test_wave_operator_needs_positive_horizon(grid1d, single_sys, gaussian1d):
    with pytest.raises(ValueError):
        wave_operator(gaussian1d, -1.0, grid1d, single_sys, 1e-3)


# -- space-time norms ----------------------------------------------------------------------

def test_spacetime_norm_zero_trajectory(grid1d, single_sys):
    zero = [FieldState(t, np.zeros((1, 256), dtype=complex)) for t in (0.0, 0.1, 0.2)]
    sn = spacetime_norm(zero, grid1d, single_sys, math.inf, 2)
    assert sn.total == 0.0


def test_spacetime_norm_rejects_inadmissible(grid1d, single_sys, gaussian1d):
    with pytest.raises(ValueError):
        spacetime_norm([gaussian1d], grid1d, single_sys, 3, 3)


def test_spacetime_norm_sampling_convergence(grid1d):
    s = SystemParams(N=1, p=2.0, kappa=1, beta=np.zeros((1, 1)), lam=np.zeros((1, 1)))
    st0 = make_initial("gaussian_packet", {"amplitude": 1.0, "sigma": 2.0},
                       grid1d, s, seed=0)
    q, r = pair_from_p(2.0, 1)  # admissible pair for the 1-d grid
    totals = []
    for stride in (4, 2):
        samples = []
        integrate(st0, grid1d, s, StepPlan.for_horizon(0.2, 5e-3, stride),
                  lambda k, state: samples.append(state))
        sn = spacetime_norm(samples, grid1d, s, q, r)
        assert np.all(np.diff(sn.cumulative) >= -1e-12)
        totals.append(sn.total)
    assert abs(totals[0] - totals[1]) <= 0.1 * abs(totals[1])
