import math

import numpy as np
import pytest

from vdwmedium.errors import SingularityError
from vdwmedium.green import (
    curl_green,
    curl_green_iu,
    dyadic_green,
    green_iu,
    trace_curl_closed_form,
    trace_curlG_curlG,
    trace_GG,
    trace_GG_closed_form,
)
from vdwmedium.kernels import Separation
from vdwmedium.materials import VACUUM, LorentzTerm, ResponseModel
from vdwmedium.validation import _fd_curl, random_medium

MD = ResponseModel((LorentzTerm(1.2, 0.9),), (LorentzTerm(0.8, 1.5),))
LOSSY = ResponseModel((LorentzTerm(1.5, 0.8, 0.3),), (LorentzTerm(0.9, 0.6, 0.2),))


def test_imaginary_axis_symmetric_and_real():
    sep = Separation(0.8, (1, -2, 0.4))
    G = dyadic_green(0.7j, sep, MD).values
    assert np.max(np.abs(G.imag)) <= 1e-15 * np.max(np.abs(G))
    assert np.allclose(G, G.T, rtol=0, atol=1e-15 * np.max(np.abs(G)))
    vec = green_iu(0.7, sep, MD)[0]
    assert np.allclose(vec, G.real, rtol=1e-13, atol=0)


def test_decay_rate_matches_index():
    from vdwmedium.materials import n_iu
    u, R = 0.9, 4.0
    sep1, sep2 = Separation(R, (1, 0, 0)), Separation(2 * R, (1, 0, 0))
    # the transverse component is dominated by e^{-nuR}/R at large R
    g1 = green_iu(u, sep1, MD)[0][1, 1]
    g2 = green_iu(u, sep2, MD)[0][1, 1]
    kap = n_iu(MD, u) * u
    slope = math.log(g2 / g1) / R

    def shape(r):
        return (1 + 1 / (kap * r) + 1 / (kap * r) ** 2) / r
    assert slope == pytest.approx(-kap + math.log(shape(2 * R) / shape(R)) / R, rel=1e-10)
    far = Separation(200.0, (1, 0, 0)), Separation(400.0, (1, 0, 0))
    ga, gb = (s.R * green_iu(u, s, MD)[0][1, 1] for s in far)
    assert math.log(gb / ga) / 200.0 == pytest.approx(-kap, rel=1e-3)


def test_far_field_is_transverse():
    # the longitudinal part falls off as 2/(kR) relative to the transverse one
    kR = 2.0 * 50.0
    G = dyadic_green(2.0, Separation(50.0), VACUUM).values
    assert abs(G[2, 2]) / abs(G[0, 0]) == pytest.approx(2 / kR, rel=2 / kR)


def test_curl_matches_finite_difference():
    rng = np.random.default_rng(21)
    for k in range(10):
        med = random_medium(rng, lossy=True)
        R = float(10 ** rng.uniform(-1, 0.5))
        sep = Separation(R, tuple(rng.normal(size=3)))
        freq = complex(rng.uniform(0.1, 3)) if k % 2 else 1j * rng.uniform(0.1, 3)
        ana = curl_green(freq, sep, med).values
        fd = _fd_curl(freq, sep, med, 1e-3 * R)
        assert np.max(np.abs(ana - fd)) <= 1e-6 * np.max(np.abs(ana))


def test_curl_sides_and_structure():
    sep = Separation(1.1, (0.3, 0.2, 1.0))
    left = curl_green(0.8, sep, LOSSY, "left").values
    right = curl_green(0.8, sep, LOSSY, "right").values
    assert np.array_equal(left, -right)
    assert np.all(np.diag(left) == 0)
    assert np.array_equal(curl_green_iu(0.5, sep, MD, "left"), -curl_green_iu(0.5, sep, MD, "right"))


def test_curl_iu_matches_complex_route():
    sep = Separation(0.6, (1, 1, 1))
    a = curl_green(0.4j, sep, MD).values
    b = curl_green_iu(0.4, sep, MD)[0]
    assert np.allclose(a.real, b, rtol=1e-13, atol=0)


def test_trace_closed_forms_grid():
    us = np.geomspace(1e-2, 3.0, 10)
    for R in np.geomspace(0.05, 3.0, 10):
        sep = Separation(R, (0.2, -0.5, 1.0))
        np.testing.assert_allclose(trace_GG(us, sep, MD), trace_GG_closed_form(us, R, MD), rtol=1e-10)
        np.testing.assert_allclose(trace_curlG_curlG(us, sep, MD), trace_curl_closed_form(us, R, MD),
                                   rtol=1e-10)


def test_trace_at_x_equal_2():
    R = 1.5
    u = 1 / R  # vacuum: x = 2uR = 2
    expected = 272 * math.exp(-2) / (128 * math.pi**2 * R**2)
    assert trace_GG(u, Separation(R), VACUUM) == pytest.approx(expected, rel=1e-13)


def test_curl_trace_small_x_and_mu_scaling():
    R = 0.7
    assert trace_curlG_curlG(1e-9, Separation(R), VACUUM) == pytest.approx(1 / (8 * math.pi**2 * R**4), rel=1e-7)
    # static mu = 3 against mu = 1 with the same n
    mu3 = ResponseModel((), (LorentzTerm(math.sqrt(2.0) * 1e3, 1e3),))
    ratio = trace_curlG_curlG(1e-9, Separation(R), mu3) / trace_curlG_curlG(1e-9, Separation(R), VACUUM)
    assert ratio == pytest.approx(9.0, rel=1e-6)
    assert trace_curlG_curlG(0.3, Separation(R), MD) > 0


def test_vacuum_scaling_with_distance():
    # Tr[GG] R^2 x^4 / F(x) e^{-x} is scale free, so doubling R at fixed x quarters it
    a = trace_GG(0.5, Separation(1.0), VACUUM)
    b = trace_GG(0.25, Separation(2.0), VACUUM)
    assert b == pytest.approx(a / 4, rel=1e-13)


def test_singular_inputs():
    with pytest.raises(SingularityError):
        dyadic_green(0.0, Separation(1.0), VACUUM)
    with pytest.raises(SingularityError):
        green_iu(0.0, Separation(1.0), VACUUM)
    with pytest.raises(SingularityError):
        Separation(0.0)
