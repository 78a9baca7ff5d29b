"""Dyadic Green function of an infinite homogeneous magneto-dielectric.

    G_ij = mu/(4 pi k^2) [k^2 (d_ij - R_i R_j) - (d_ij - 3 R_i R_j)(1/R^2 - ik/R)] e^{ikR}/R

with ``k = n(w) w``.  On the imaginary axis ``w = iu`` the wavenumber is
``k = i n(iu) u`` and every quantity here is real; the ``*_iu`` functions
evaluate that case directly on arrays of ``u``.

Orientation: ``sep`` points from A to B, and "left"/"right" curls
differentiate with respect to ``r_A``/``r_B``.  Because ``G`` depends only on
``r_B - r_A`` the two curls differ by an overall sign.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SingularityError
from .kernels import LEVI_CIVITA, Separation, poly_F, poly_G
from .materials import ResponseModel, eps_iu, lorentz_sum, mu_iu, response_complex

__all__ = [
    "GreenEvaluation",
    "dyadic_green",
    "curl_green",
    "green_iu",
    "curl_green_iu",
    "trace_GG",
    "trace_curlG_curlG",
    "trace_GG_closed_form",
    "trace_curl_closed_form",
]


@dataclass(frozen=True)
class GreenEvaluation:
    freq: complex
    sep: Separation
    medium: ResponseModel
    values: np.ndarray

    @property
    def on_imaginary_axis(self):
        return self.freq.real == 0 and self.freq.imag > 0


def _response(medium, freq):
    """Complex ``(mu, k)`` at a complex frequency."""
    freq = complex(freq)
    if freq == 0:
        raise SingularityError("k = 0: the Green function has a static pole")
    if not (math.isfinite(freq.real) and math.isfinite(freq.imag)):
        raise DomainError("frequency must be finite")
    if freq.imag == 0 and freq.real > 0:
        r = response_complex(medium, freq.real)
        return r.mu, r.n * freq.real
    if freq.real == 0 and freq.imag > 0:
        u = freq.imag
        e, m = eps_iu(medium, u), mu_iu(medium, u)
        return complex(m), 1j * math.sqrt(e * m) * u
    eps = lorentz_sum(medium.eps_terms, freq)
    mu = lorentz_sum(medium.mu_terms, freq)
    return mu, np.sqrt(eps) * np.sqrt(mu) * freq


def dyadic_green(freq, sep, medium):
    """Green dyadic at real ``w > 0`` (lossy allowed) or at ``freq = 1j*u``."""
    mu, k = _response(medium, freq)
    if k == 0:
        raise SingularityError("k = 0: the Green function has a static pole")
    R = sep.R
    rr = np.outer(sep.unit, sep.unit)
    eye = np.eye(3)
    bracket = k * k * (eye - rr) - (eye - 3 * rr) * (1 / R**2 - 1j * k / R)
    vals = mu / (4 * math.pi * k * k) * bracket * np.exp(1j * k * R) / R
    return GreenEvaluation(complex(freq), sep, medium, vals)


def curl_green(freq, sep, medium, side="left"):
    """Analytic curl of the Green dyadic with respect to ``r_A`` or ``r_B``.

    Only the scalar part ``mu e^{ikR}/(4 pi R)`` has a curl, giving
    ``(curl_A G)_ij = mu eps_ijl Rhat_l (ik - 1/R) e^{ikR}/(4 pi R)`` for
    ``Rhat`` pointing from A to B.
    """
    if side not in ("left", "right"):
        raise DomainError("side must be 'left' or 'right'")
    mu, k = _response(medium, freq)
    R = sep.R
    eps_r = np.einsum("ijl,l->ij", LEVI_CIVITA, sep.unit)
    vals = mu * eps_r * (1j * k - 1 / R) * np.exp(1j * k * R) / (4 * math.pi * R)
    if side == "right":
        vals = -vals
    return GreenEvaluation(complex(freq), sep, medium, vals)


# -- imaginary axis, vectorized -----------------------------------------------


def _iu_parts(u, medium):
    u = np.atleast_1d(np.asarray(u, dtype=float))
    if np.any(u <= 0):
        raise SingularityError("imaginary frequency must be > 0 (static pole at u = 0)")
    e = np.atleast_1d(eps_iu(medium, u))
    m = np.atleast_1d(mu_iu(medium, u))
    return u, e, m, np.sqrt(e * m) * u


def green_iu(u, sep, medium):
    """Real Green dyadics ``G(iu)`` stacked along the first axis, shape ``(N, 3, 3)``."""
    u, e, m, kap = _iu_parts(u, medium)
    R = sep.R
    rr = np.outer(sep.unit, sep.unit)
    eye = np.eye(3)
    near = 1 / R**2 + kap / R
    pref = m * np.exp(-kap * R) / (4 * math.pi * kap**2 * R)
    return pref[:, None, None] * ((kap**2)[:, None, None] * (eye - rr)
                                  + near[:, None, None] * (eye - 3 * rr))


def curl_green_iu(u, sep, medium, side="left"):
    """Real curl dyadics at ``iu``, shape ``(N, 3, 3)``."""
    if side not in ("left", "right"):
        raise DomainError("side must be 'left' or 'right'")
    u, e, m, kap = _iu_parts(u, medium)
    R = sep.R
    eps_r = np.einsum("ijl,l->ij", LEVI_CIVITA, sep.unit)
    radial = -m * (kap + 1 / R) * np.exp(-kap * R) / (4 * math.pi * R)
    out = radial[:, None, None] * eps_r
    return -out if side == "right" else out


def _squeeze(x, u):
    return float(x[0]) if np.ndim(u) == 0 else x


def trace_GG(u, sep, medium):
    """``Tr[G(iu) . G(iu)]`` summed component by component."""
    G = green_iu(u, sep, medium)
    return _squeeze(np.einsum("nij,nji->n", G, G), u)


def trace_curlG_curlG(u, sep, medium):
    """``Tr[(curl_A G)(iu) . (curl_B G)(iu)]`` (matrix product, then trace).

    With this ordering the trace is positive, which is the sign that makes
    the mixed electric-magnetic energy repulsive.
    """
    A = curl_green_iu(u, sep, medium, "left")
    B = curl_green_iu(u, sep, medium, "right")
    return _squeeze(np.einsum("nij,nji->n", A, B), u)


def trace_GG_closed_form(u, R, medium):
    """``mu^2 F(x) e^{-x} / (8 pi^2 R^2 x^4)`` with ``x = 2 n(iu) u R``."""
    u = np.asarray(u, dtype=float)
    m = mu_iu(medium, u)
    x = 2 * np.sqrt(eps_iu(medium, u) * m) * u * R
    return m * m * poly_F(x) * np.exp(-x) / (8 * math.pi**2 * R**2 * x**4)


def trace_curl_closed_form(u, R, medium):
    """``mu^2 G(x) e^{-x} / (32 pi^2 R^4)`` with ``x = 2 n(iu) u R``."""
    u = np.asarray(u, dtype=float)
    m = mu_iu(medium, u)
    x = 2 * np.sqrt(eps_iu(medium, u) * m) * u * R
    return m * m * poly_G(x) * np.exp(-x) / (32 * math.pi**2 * R**4)
