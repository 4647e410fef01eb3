import math

import numpy as np
import pytest

import flutterpy as fp


def test_thresholds_case_1():
    t = fp.thresholds(fp.reference_case(1))
    assert t["H_PD_over_mu"] == pytest.approx(0.42, abs=0.02)
    assert t["H_E_over_mu"] == pytest.approx(0.19, abs=0.02)
    assert t["theta_nE_deg"] == pytest.approx(-28.0, abs=0.5)


def test_cisi_at_one():
    ci, si = fp.cisi(1.0)
    assert ci.real == pytest.approx(0.337403922900968, abs=1e-12)
    assert si.real == pytest.approx(0.946083070367183, abs=1e-12)


def test_fans_and_spectrum():
    s = fp.reference_case(3, 1.5)
    fans = fp.flutter_fans(s)
    assert len(fans) == 1
    lo, hi = fans[0]
    c1, c2 = fp.acoustic_spectrum(s, 0.5 * (lo + hi))
    assert abs(c1.imag) > 0 and c1 == pytest.approx(c2.conjugate())


def test_greens_even_and_nonsymmetric():
    s = fp.reference_case(3, 2.0)
    g = fp.greens_at(2.0, 1.0, s)
    h = fp.greens_at(-2.0, -1.0, s)
    assert g.shape == (2, 2)
    assert np.allclose(g, h, rtol=1e-7)
    assert abs(g[0, 1] - g[1, 0]) > 1e-4 * np.linalg.norm(g)


def test_sample_grid_masks_and_antisymmetry():
    u = fp.sample_grid(fp.reference_case(2, 0.25), extent=6.0, n=61)
    assert u.shape == (61, 61, 2)
    assert np.isnan(u.real).sum() > 0
    # u(-x) = -u(x) about the dipole centre
    ok = ~np.isnan(u.real)
    assert np.allclose(u[ok], -u[::-1, ::-1][ok], rtol=1e-6, atol=1e-12)


def test_errors_are_translated():
    with pytest.raises(ValueError):
        fp.reference_case(7)
    with pytest.raises(ValueError):
        fp.greens_at(0.0, 0.0, fp.reference_case(1))
    s = fp.MaterialState()
    with pytest.raises(ValueError):
        s.theta_L_deg = 400.0
    assert math.isfinite(s.H_over_mu)
