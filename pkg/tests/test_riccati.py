import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from breakwave.riccati import (
    RiccatiPair, RiccatiScalar, blowup_time, closed_form, integrate_pair, integrate_scalar,
    trajectory_csv_rows,
)


def test_closed_form_examples():
    assert closed_form(-3.0, -0.5, 0.0) == -3.0
    assert closed_form(-2.0, -1.0, 0.25) == pytest.approx(-4.0)
    assert closed_form(-1.0, -1.0, 1 - 1e-9) < -1e8
    with pytest.raises(ZeroDivisionError):
        closed_form(-1.0, -1.0, 1.0)


def test_blowup_time_examples():
    assert blowup_time(-1.0, -1.0) == 1.0
    assert blowup_time(0.5, -1.0) is None
    # m1(0) = 0 gives m(0) = -K0/mu > 0: the majorant has no pole
    K0, mu = math.pi / 4, -0.75
    assert blowup_time(0.0 - K0 / mu, mu) is None
    assert blowup_time(-2.0 - K0 / mu, mu) == pytest.approx(1 / ((-2.0 - K0 / mu) * mu))


def test_pair_requires_negative_mu():
    with pytest.raises(ValueError):
        RiccatiPair(0.0, 1.0, -1.0, 1.0)


@pytest.mark.parametrize("bad", [(0.0, 1.0), (1e-3, 0.0), (-1e-3, 1.0)])
def test_nonpositive_step_or_horizon(bad):
    with pytest.raises(ValueError):
        integrate_pair(RiccatiPair(-1.0, 0.0, -1.0, 0.0), *bad)


def test_decoupled_pair_matches_closed_form_and_converges():
    m0, mu = -2.0, -1.0
    pole = blowup_time(m0, mu)
    pair = RiccatiPair(mu, 0.0, m0, 0.7)
    errs = []
    for dt in (2e-3, 1e-3, 5e-4):
        tr = integrate_pair(pair, dt, 0.9 * pole)
        assert tr.t[-1] == pytest.approx(0.9 * pole)
        assert not tr.blowup
        errs.append(np.max(np.abs(tr.m1 - closed_form(m0, mu, tr.t))))
    assert max(errs) < 1e-6
    assert errs[0] / errs[1] >= 8 and errs[1] / errs[2] >= 8


def test_equilibrium_stays_zero():
    tr = integrate_pair(RiccatiPair(-1.0, 0.8, 0.0, 0.0), 1e-2, 5.0)
    assert np.all(tr.m == 0.0)
    assert not tr.blowup


def test_blowup_detected_near_pole():
    tr = integrate_pair(RiccatiPair(-1.0, 0.0, -1.0, 0.0), 1e-3, 2.0)
    assert tr.blowup
    lo, hi = tr.blowup_interval
    assert lo < hi
    assert abs(hi - 1.0) < 1e-5
    assert np.all(np.isfinite(tr.m))


@given(st.floats(-2.0, -0.2), st.floats(0.0, 1.5), st.floats(-6.0, -0.5), st.floats(0.0, 3.0))
def test_coupled_pair_obeys_comparison(mu, K0, m1, m2):
    if not m1 + m2 <= 2 * K0 / mu:
        m2 = 2 * K0 / mu - m1
        if m2 < m1:
            return
    pair = RiccatiPair(mu, K0, m1, m2)
    m0 = pair.shifted_m0
    pole = blowup_time(m0, mu)
    dt = 1e-3
    tr = integrate_pair(pair, dt, 2 * pole if pole else 2.0)
    # sum bound persists
    assert np.all(tr.m1 + tr.m2 <= 2 * K0 / mu + 1e-9 * np.maximum(1, np.abs(tr.m).sum(1)))
    if pole is not None:
        assert tr.blowup and tr.blowup_interval[1] <= pole + 5 * dt
        # away from the pole RK4 error is below (dt |mu m|)^4 relative
        pre = tr.t < 0.8 * pole
        shifted = tr.m1[pre] - K0 / mu
        bound = closed_form(m0, mu, tr.t[pre])
        assert np.all(shifted <= bound + 1e-5 * np.maximum(1, np.abs(bound)))


def test_scalar_constant_coefficient_matches_closed_form():
    r = RiccatiScalar(g=lambda t: -0.5, initial=-3.0)
    tr = integrate_scalar(r, 1e-3, 0.5)
    assert np.max(np.abs(tr.m[:, 0] - closed_form(-3.0, -0.5, tr.t))) < 1e-6


def test_scalar_sign_changing_g_keeps_zero():
    tr = integrate_scalar(RiccatiScalar(g=math.sin, initial=0.0), 1e-2, 10.0)
    assert np.all(tr.m == 0.0)


def test_scalar_switching_coefficient_piecewise_oracle():
    # g = -1 on [0, 1/2), +1 afterwards; m(0) = -1
    r = RiccatiScalar(g=lambda t: -1.0 if t < 0.5 else 1.0, initial=-1.0)
    m_half = closed_form(-1.0, -1.0, 0.5)
    errs = []
    for dt in (1e-3, 5e-4):
        tr = integrate_scalar(r, dt, 2.0)
        assert not tr.blowup
        first = tr.t < 0.5 - dt
        assert np.allclose(tr.m[first, 0], closed_form(-1.0, -1.0, tr.t[first]), atol=1e-8)
        later = tr.t >= 0.5 + dt
        exact = m_half / (1 - m_half * (tr.t[later] - 0.5))
        errs.append(np.max(np.abs(tr.m[later, 0] - exact)))
    # the step straddling the jump costs one order
    assert errs[0] < 2e-3
    assert 1.8 < errs[0] / errs[1] < 2.2


def test_scalar_forcing_hook():
    # m' = 1 with g = 0 integrates to m = t
    tr = integrate_scalar(RiccatiScalar(g=lambda t: 0.0, initial=0.0, forcing=lambda t: 1.0),
                          0.1, 1.0)
    assert np.allclose(tr.m[:, 0], tr.t, atol=1e-14)


def test_csv_rows():
    tr = integrate_pair(RiccatiPair(-1.0, 0.0, -1.0, 0.5), 0.1, 0.3)
    rows = list(trajectory_csv_rows(tr))
    assert rows[0] == (0.0, -1.0, 0.5)
    assert len(rows) == tr.t.size
    rows = list(trajectory_csv_rows(integrate_scalar(RiccatiScalar(lambda t: 0, 1.0), 0.5, 1.0)))
    assert rows[-1][2] == ""
