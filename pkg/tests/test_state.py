import numpy as np
import pytest

from q4nl import (BoundaryContaminationError, SystemParams,
                  boundary_mass_fraction, make_initial, mass)

import oracles


def test_gaussian_mass_matches_quadrature(grid1d, single_sys):
    st = make_initial("gaussian_packet", {"amplitude": 1.0, "sigma": 1.0},
                      grid1d, single_sys, seed=0)
    expected = oracles.gaussian_packet_mass_1d(1.0, 1.0, 20.0)
    assert expected == pytest.approx(np.sqrt(np.pi), rel=1e-12)
    assert mass(st, grid1d)[0] == pytest.approx(expected, rel=1e-12)


def test_zero_amplitude_gives_zero_field(grid1d, single_sys):
    st = make_initial("gaussian_packet", {"amplitude": 0.0}, grid1d, single_sys, seed=0)
    assert mass(st, grid1d)[0] == 0.0
    assert boundary_mass_fraction(st, grid1d) == 0.0


def test_same_seed_bit_identical(grid1d, single_sys):
    a = make_initial("random_schwartz", {"amplitude": 0.5, "k_sigma": 1.0},
                     grid1d, single_sys, seed=42)
    b = make_initial("random_schwartz", {"amplitude": 0.5, "k_sigma": 1.0},
                     grid1d, single_sys, seed=42)
    assert np.array_equal(a.u, b.u)
    c = make_initial("random_schwartz", {"amplitude": 0.5, "k_sigma": 1.0},
                     grid1d, single_sys, seed=43)
    assert not np.array_equal(a.u, c.u)


def test_boundary_contamination_rejected(grid1d, single_sys):
    with pytest.raises(BoundaryContaminationError):
        make_initial("gaussian_packet", {"amplitude": 1.0, "sigma": 8.0},
                     grid1d, single_sys, seed=0)
    with pytest.raises(BoundaryContaminationError):
        make_initial("gaussian_packet", {"amplitude": 1.0, "sigma": 1.0,
                                         "center": [19.0]},
                     grid1d, single_sys, seed=0)


def test_multi_bump_superposes(grid1d, single_sys):
    st = make_initial("multi_bump", {"bumps": [
        {"amplitude": 1.0, "sigma": 1.0, "center": [-5.0]},
        {"amplitude": 0.5, "sigma": 1.5, "center": [5.0], "velocity": [1.0]},
    ]}, grid1d, single_sys, seed=0)
    m = mass(st, grid1d)[0]

    def profile(x):
        return np.abs(np.exp(-(x + 5.0) ** 2 / 2.0)
                      + 0.5 * np.exp(-(x - 5.0) ** 2 / (2 * 1.5**2)) * np.exp(1j * x)) ** 2

    expected = oracles.quadrature_1d(profile, -20.0, 20.0)
    assert m == pytest.approx(expected, rel=1e-11)


def test_per_component_params(grid1d, two_sys):
    st = make_initial("gaussian_packet",
                      {"amplitude": [1.0, 0.0], "sigma": 1.0},
                      grid1d, two_sys, seed=0)
    m = mass(st, grid1d)
    assert m[0] > 0 and m[1] == 0.0


def test_state_is_immutable(gaussian1d):
    with pytest.raises(ValueError):
        gaussian1d.u[0, 0] = 1.0


def test_unknown_kind_rejected(grid1d, single_sys):
    with pytest.raises(ValueError):
        make_initial("plane", {}, grid1d, single_sys, seed=0)


def test_component_count_matches_system(grid1d, two_sys):
    st = make_initial("gaussian_packet", {"amplitude": 1.0}, grid1d, two_sys, seed=0)
    assert st.N == two_sys.N == 2


def test_system_params_validation():
    with pytest.raises(ValueError):
        SystemParams(N=2, p=2.0, kappa=1, beta=np.array([[1.0, 0.5], [0.2, 1.0]]),
                     lam=np.zeros((2, 2)))  # not symmetric
    with pytest.raises(ValueError):
        SystemParams(N=1, p=2.0, kappa=1, beta=np.array([[-1.0]]), lam=np.zeros((1, 1)))
    with pytest.raises(ValueError):
        SystemParams(N=1, p=2.0, kappa=2, beta=np.array([[1.0]]), lam=np.zeros((1, 1)))
    with pytest.raises(ValueError):
        SystemParams(N=1, p=-1.0, kappa=0, beta=np.array([[1.0]]), lam=np.zeros((1, 1)))


def test_gamma_derivation():
    s = SystemParams(N=2, p=1.0, kappa=0,
                     beta=np.array([[1.0, 0.5], [0.5, 1.0]]),
                     lam=np.array([[0.25, 0.0], [0.0, 0.25]]))
    np.testing.assert_allclose(s.gamma, np.array([[1.5, 0.5], [0.5, 1.5]]))
    assert s.coupling_theory_ok


def test_zero_coupling_flagged_not_rejected():
    s = SystemParams(N=1, p=2.0, kappa=1, beta=np.zeros((1, 1)), lam=np.zeros((1, 1)))
    assert not s.coupling_theory_ok
