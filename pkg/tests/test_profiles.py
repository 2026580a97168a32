import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from breakwave.grid import periodic_interp
from breakwave.profiles import (
    DENSE_POINTS, GaussianBump, Profile, RampBump, TanhFront, make_profile, sample, stats,
    zero_profile,
)


def generic_stats(profile):
    """Bypass closed-form overrides: dense sampling + root refinement."""
    return Profile.stats(profile)


def test_gaussian_closed_form():
    s = stats(GaussianBump(A=1.0, w=1.0, x0=0.0))
    assert s.sup_slope == pytest.approx(math.sqrt(2 / math.e), abs=1e-15)
    assert s.xi2 == pytest.approx(-1 / math.sqrt(2), abs=1e-15)
    assert s.inf_slope == -s.sup_slope
    assert s.xi1 == -s.xi2
    assert s.l1_norm == pytest.approx(math.sqrt(math.pi), rel=1e-15)


@pytest.mark.parametrize("profile", [
    GaussianBump(A=0.7, w=1.3, x0=0.4), GaussianBump(A=-0.5, w=0.6, x0=-1.1),
    RampBump(height=0.3, rise=0.8, fall=0.2, plateau=0.5, center=0.25),
])
def test_closed_form_stats_match_dense_search(profile):
    a, b = profile.stats(), generic_stats(profile)
    for key in ("inf_slope", "sup_slope", "xi1", "xi2", "u0_min_at_extrema",
                "u0_max_at_extrema"):
        assert getattr(a, key) == pytest.approx(getattr(b, key), abs=1e-9), key
    assert a.l1_norm == pytest.approx(b.l1_norm, rel=1e-10)


@pytest.mark.parametrize("profile", [
    TanhFront(A=0.5, s=6.0), TanhFront(A=0.2, s=20.0, w=0.5, L=16.0),
    GaussianBump(A=0.3, w=2.0), RampBump(),
])
def test_inf_slope_against_dense_sampling(profile):
    s = profile.stats()
    # nothing on a global dense grid undercuts the located minimum ...
    x = np.linspace(-profile.L, profile.L, 4 * DENSE_POINTS + 1)
    assert profile.u1(x).min() >= s.inf_slope - 1e-12
    # ... and a dense local grid around it reproduces the value
    xl = np.linspace(s.xi1 - 1e-3, s.xi1 + 1e-3, DENSE_POINTS + 1)
    assert profile.u1(xl).min() == pytest.approx(s.inf_slope, abs=1e-10)


def test_zero_profile():
    s = stats(zero_profile())
    assert (s.inf_slope, s.sup_slope, s.l1_norm) == (0.0, 0.0, 0.0)
    assert np.all(sample(zero_profile(N=64)).values == 0.0)


def test_tanh_front_flags_ambiguity():
    # u0' has its maximum at two mirror points +-y*
    s = TanhFront(A=0.5, s=5.0).stats()
    assert s.ambiguous
    assert len(s.xi2_candidates) == 2
    assert s.xi2 == min(s.xi2_candidates)
    assert s.xi2_candidates[0] == pytest.approx(-s.xi2_candidates[1], abs=1e-9)


def test_ramp_extrema():
    r = RampBump.from_slopes(0.2, sup_slope=0.3, inf_slope=-3.0)
    s = r.stats()
    assert s.sup_slope == pytest.approx(0.3)
    assert s.inf_slope == pytest.approx(-3.0)
    assert s.u_at_xi1 == pytest.approx(0.1)
    assert s.u_at_xi2 == pytest.approx(0.1)


def test_edge_decay_enforced():
    with pytest.raises(ValueError, match="enlarge L"):
        GaussianBump(A=1.0, w=1.0, L=4.0)


def test_sample_requires_power_of_two():
    with pytest.raises(ValueError, match="power of two"):
        GaussianBump(N=1000).sample()


def test_samples_are_node_exact():
    p = GaussianBump(A=0.9, w=1.7, x0=0.2, N=256)
    g = p.sample()
    assert np.array_equal(g.values, p.u0(g.x))
    assert all(periodic_interp(g.values, g.L, xj) == vj
               for xj, vj in zip(g.x[::17], g.values[::17]))


def test_trapezoid_l1_matches_closed_form():
    p = GaussianBump(A=0.8, w=1.2, x0=0.3, N=4096)
    g = p.sample()
    assert abs(g.h * np.abs(g.values).sum() - p.l1_norm()) < 1e-8


def test_tanh_l1_matches_quadrature_of_abs():
    p = TanhFront(A=0.4, s=3.0, w=1.5)
    assert p.l1_norm() == pytest.approx(Profile.l1_norm(p), rel=1e-9)


@given(st.floats(-3.0, 3.0))
def test_translation_invariance(shift):
    a = TanhFront(A=0.3, s=4.0, x0=0.0).stats()
    b = TanhFront(A=0.3, s=4.0, x0=shift).stats()
    assert b.xi1 == pytest.approx(a.xi1 + shift, abs=1e-9)
    assert b.xi2 == pytest.approx(a.xi2 + shift, abs=1e-9)
    for key in ("inf_slope", "sup_slope", "u0_min_at_extrema", "u0_max_at_extrema", "l1_norm"):
        assert getattr(b, key) == pytest.approx(getattr(a, key), abs=1e-12), key


@given(st.floats(0.05, 5.0))
def test_amplitude_scaling(alpha):
    a = GaussianBump(A=0.4, w=0.8).stats()
    b = GaussianBump(A=0.4 * alpha, w=0.8).stats()
    assert b.inf_slope == pytest.approx(alpha * a.inf_slope, rel=1e-12)
    assert b.sup_slope == pytest.approx(alpha * a.sup_slope, rel=1e-12)
    assert b.l1_norm == pytest.approx(alpha * a.l1_norm, rel=1e-12)


@given(st.floats(0.05, 0.9), st.floats(1.0, 12.0), st.floats(0.4, 2.0))
def test_slope_signs_and_extremum_values(A, s, w):
    st_ = TanhFront(A=A, s=s, w=w).stats()
    assert st_.inf_slope <= 0 <= st_.sup_slope
    assert st_.u0_min_at_extrema == min(st_.u_at_xi1, st_.u_at_xi2)
    assert st_.u0_max_at_extrema == max(st_.u_at_xi1, st_.u_at_xi2)


def test_make_profile():
    assert make_profile("GaussianBump", A=0.1) == GaussianBump(A=0.1)
    with pytest.raises(ValueError):
        make_profile("Nope")
