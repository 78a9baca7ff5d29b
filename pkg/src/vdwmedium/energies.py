"""Van der Waals energies of two particles in a magneto-dielectric host.

Two independent routes are implemented:

* ``mode_sum``: closed-form imaginary-axis integrands built from the
  polynomials F and G of :mod:`vdwmedium.kernels`;
* ``green_trace``: integrands built from the traces of numerically assembled
  Green dyadics (:mod:`vdwmedium.green`).

All values are in natural units (hbar = c = 1).  Energies are in units of
``hbar * w_ref`` when frequencies are in units of ``w_ref`` and lengths in
``c / w_ref``.

The Green-route prefactors are fixed up to a single constant
:data:`GREEN_CALIBRATION` shared by all three terms.  With the Green dyadic
normalised as in :mod:`vdwmedium.green`,
``u**4 Tr[G.G] = mu**2 F(x) e^{-x} / (128 pi**2 R**6 n**4)`` and
``Tr[curl G . curl G] = mu**2 G(x) e^{-x} / (32 pi**2 R**4)``, so matching the
closed forms requires ``GREEN_CALIBRATION = 16 pi**2``.  The mixed term keeps
the ``1/mu(iu)**2`` factor that accompanies the curl product.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .green import curl_green_iu, green_iu
from .kernels import Separation, poly_F, poly_G, poly_P
from .materials import (
    VACUUM,
    Particle,
    ResponseModel,
    TwoLevelPolarizability,
    eps_iu,
    mu_iu,
    two_level_dielectric,
)
from .quadrature import QuadratureConfig, QuadratureResult, integrate_semi_infinite

__all__ = [
    "GREEN_CALIBRATION",
    "METHODS",
    "TERMS",
    "InteractionQuery",
    "TermResult",
    "EnergyBreakdown",
    "w_ee",
    "w_mm",
    "w_em",
    "w_total",
    "d_ratio",
    "two_level_query",
    "london",
    "casimir_polder_ee",
    "casimir_polder_em",
    "large_r_medium",
    "limit_oracle",
]

GREEN_CALIBRATION = 16 * math.pi**2

METHODS = ("mode_sum", "green_trace", "both")
TERMS = ("ee", "mm", "em")


@dataclass(frozen=True)
class InteractionQuery:
    a: Particle
    b: Particle
    R: float
    medium: ResponseModel = VACUUM
    method: str = "mode_sum"
    terms: tuple[str, ...] = TERMS
    quad: QuadratureConfig = field(default_factory=QuadratureConfig)

    def __post_init__(self):
        if not (math.isfinite(self.R) and self.R > 0):
            raise DomainError("separation R must be finite and > 0")
        if self.method not in METHODS:
            raise DomainError(f"method must be one of {METHODS}")
        terms = tuple(dict.fromkeys(self.terms))
        if not terms or any(t not in TERMS for t in terms):
            raise DomainError(f"terms must be a non-empty subset of {TERMS}")
        object.__setattr__(self, "terms", terms)


@dataclass(frozen=True)
class TermResult:
    value: float
    quad: QuadratureResult
    method: str


@dataclass(frozen=True)
class EnergyBreakdown:
    W_ee: float
    W_mm: float
    W_em: float
    W_total: float
    quad: dict
    method: str
    path_discrepancy: float | None = None
    green: dict | None = None

    @property
    def converged(self):
        return all(q.converged for q in self.quad.values())

    @property
    def error(self):
        return sum(q.error for q in self.quad.values())


def _u_scale(pols, medium, R):
    """Scale hint: the smallest polarizability frequency or the retardation scale."""
    n0 = math.sqrt(eps_iu(medium, 0.0) * mu_iu(medium, 0.0))
    scales = [1.0 / (2.0 * n0 * R)]
    scales += [p.scale for p in pols if p.scale is not None and not p.is_zero]
    return min(scales)


def _integrate(f, u0, cfg):
    """Integrate ``f`` normalised by its typical magnitude near ``u0``.

    The normalisation makes ``cfg.abs_tol`` meaningful whatever the units of
    the polarizabilities; the result is scaled back.
    """
    probe = np.abs(f(u0 * np.array([0.25, 0.5, 1.0, 2.0]))) * u0
    scale = float(np.max(probe))
    if not (scale > 0 and math.isfinite(scale)):
        scale = 1.0
    res = integrate_semi_infinite(lambda u: f(u) / scale, u0, cfg)
    return res.scaled(scale)


def _medium_iu(medium, u, R):
    e = eps_iu(medium, u)
    m = mu_iu(medium, u)
    x = 2.0 * np.sqrt(e * m) * u * R
    return e, m, x


def _pair(q, kind):
    """Polarizability pairs (A, B) entering a term."""
    if kind == "ee":
        return [(q.a.electric, q.b.electric)]
    if kind == "mm":
        return [(q.a.magnetic, q.b.magnetic)]
    return [(q.a.electric, q.b.magnetic), (q.a.magnetic, q.b.electric)]


def _alpha_product(pairs, u):
    out = np.zeros_like(u)
    for pa, pb in pairs:
        if not (pa.is_zero or pb.is_zero):
            out = out + pa.at_iu(u) * pb.at_iu(u)
    return out


def _mode_sum_integrand(q, kind, pairs):
    R, med = q.R, q.medium

    def f(u):
        e, m, x = _medium_iu(med, u, R)
        aa = _alpha_product(pairs, u)
        if kind == "ee":
            return aa / (e * e) * poly_F(x) * np.exp(-x)
        if kind == "mm":
            return aa / (m * m) * poly_F(x) * np.exp(-x)
        return u * u * aa * poly_G(x) * np.exp(-x)

    prefactor = -1.0 / (16 * math.pi * R**6) if kind in ("ee", "mm") else 1.0 / (4 * math.pi * R**4)
    return f, prefactor


def _green_integrand(q, kind, pairs):
    sep = Separation(q.R)
    med = q.medium

    def f(u):
        aa = _alpha_product(pairs, u)
        if kind == "em":
            A = curl_green_iu(u, sep, med, "left")
            B = curl_green_iu(u, sep, med, "right")
            tr = np.einsum("nij,nji->n", A, B)
            m = mu_iu(med, u)
            return aa * u * u * tr / (m * m)
        G = green_iu(u, sep, med)
        tr = np.einsum("nij,nji->n", G, G)
        if kind == "mm":
            e, m = eps_iu(med, u), mu_iu(med, u)
            tr = tr * (e * e) / (m * m)
        return aa * u**4 * tr

    sign = 1.0 if kind == "em" else -1.0
    return f, sign * GREEN_CALIBRATION / (2 * math.pi)


def _term(q, kind, method):
    pairs = [(pa, pb) for pa, pb in _pair(q, kind) if not (pa.is_zero or pb.is_zero)]
    if not pairs:
        return TermResult(0.0, QuadratureResult(0.0, 0.0, 0, True), method)
    build = _mode_sum_integrand if method == "mode_sum" else _green_integrand
    f, prefactor = build(q, kind, pairs)
    u0 = _u_scale([p for pair in pairs for p in pair], q.medium, q.R)
    res = _integrate(f, u0, q.quad).scaled(prefactor)
    return TermResult(res.value, res, method)


def _method(q, method):
    method = method or q.method
    if method == "both":
        method = "mode_sum"
    if method not in ("mode_sum", "green_trace"):
        raise DomainError(f"unknown method {method!r}")
    return method


def w_ee(query, method=None):
    """Electric-electric energy; negative whenever both electric polarizabilities are nonzero."""
    return _term(query, "ee", _method(query, method))


def w_mm(query, method=None):
    """Magnetic-magnetic energy, the dual of :func:`w_ee` under ``eps <-> mu``."""
    return _term(query, "mm", _method(query, method))


def w_em(query, method=None):
    """Mixed electric-magnetic energy, both cross pairings included; always >= 0."""
    return _term(query, "em", _method(query, method))


_TERM_FUNCS = {"ee": w_ee, "mm": w_mm, "em": w_em}


def _rel_diff(a, b):
    den = max(abs(a), abs(b))
    return 0.0 if den == 0 else abs(a - b) / den


def w_total(query):
    """Assemble the selected terms.

    With ``method="both"`` the reported values come from the mode sum and
    ``path_discrepancy`` holds the largest relative difference to the Green
    route over the selected terms (and the total).
    """
    primary = _method(query, None)
    values = {t: 0.0 for t in TERMS}
    quad = {}
    for t in query.terms:
        r = _TERM_FUNCS[t](query, primary)
        values[t] = r.value
        quad[t] = r.quad
    total = math.fsum(values[t] for t in query.terms)
    discrepancy = None
    green = None
    if query.method == "both":
        green = {}
        diffs = []
        for t in query.terms:
            g = _TERM_FUNCS[t](query, "green_trace")
            green[t] = g.value
            quad[f"{t}_green"] = g.quad
            diffs.append(_rel_diff(values[t], g.value))
        diffs.append(_rel_diff(total, math.fsum(green.values())))
        discrepancy = max(diffs)
    return EnergyBreakdown(values["ee"], values["mm"], values["em"], total, quad,
                           query.method, discrepancy, green)


# -- two-level model ----------------------------------------------------------


def d_ratio(r, C, cfg=None):
    """Retarded-to-London ratio for two-level atoms in a two-level dielectric.

    ``r = w0 R / c`` and ``C`` is the host coupling, ``eps(i w0 y) = 1 + C/(y^2+1)``.
    Returns a :class:`QuadratureResult` whose ``value`` is the ratio.
    """
    if not (math.isfinite(r) and r > 0):
        raise DomainError("r must be finite and > 0")
    if not (math.isfinite(C) and C >= 0):
        raise DomainError("C must be finite and >= 0")
    cfg = cfg or QuadratureConfig()

    def f(y):
        e = 1.0 + C / (y * y + 1.0)
        nry = np.sqrt(e) * r * y
        return poly_P(nry) * np.exp(-2.0 * nry) / ((y * y + 1.0) ** 2 * e * e)

    y0 = min(1.0, 1.0 / (2.0 * math.sqrt(1.0 + C) * r))
    return _integrate(f, y0, cfg).scaled(4.0 / (3.0 * math.pi))


def two_level_query(r, C, alpha0=1.0, cfg=None):
    """The ``w_ee`` query equivalent to :func:`d_ratio` (``w0 = 1``, ``R = r``)."""
    atom = Particle(electric=TwoLevelPolarizability(1.0, alpha0))
    return InteractionQuery(atom, atom, r, two_level_dielectric(C), terms=("ee",),
                            quad=cfg or QuadratureConfig())


# -- analytic limits ----------------------------------------------------------


def london(w0, alpha0, R):
    """Nonretarded London energy ``-3 w0 alpha0^2 / (4 R^6)``."""
    return -3.0 * w0 * alpha0**2 / (4.0 * R**6)


def casimir_polder_ee(alpha_a, R, alpha_b=None):
    """Retarded vacuum limit ``-23 alpha_a alpha_b / (4 pi R^7)``."""
    alpha_b = alpha_a if alpha_b is None else alpha_b
    return -23.0 * alpha_a * alpha_b / (4.0 * math.pi * R**7)


def casimir_polder_em(alpha_e, alpha_m, R):
    """Retarded vacuum electric-magnetic limit ``+7 alpha_e alpha_m / (4 pi R^7)``.

    Follows from ``int_0^inf x^2 (x+2)^2 e^{-x} dx = 56``.
    """
    return 7.0 * alpha_e * alpha_m / (4.0 * math.pi * R**7)


def large_r_medium(C):
    """Coefficient ``a`` in ``D(r) ~ a / r`` for large ``r`` in the two-level dielectric.

    Only ``y -> 0`` matters there, where ``eps = 1 + C`` and ``n = sqrt(1 + C)``,
    and ``int P(t) e^{-2t} dt = 23/4``, so ``a = 23 / (3 pi eps(0)^2 n(0))``.
    """
    return 23.0 / (3.0 * math.pi * (1.0 + C) ** 2.5)


def limit_oracle(kind, **params):
    """Dispatch to one of the closed-form limits by name."""
    funcs = {
        "london": london,
        "casimir_polder_ee": casimir_polder_ee,
        "casimir_polder_em": casimir_polder_em,
        "large_r_medium": large_r_medium,
    }
    if kind not in funcs:
        raise DomainError(f"unknown limit {kind!r}")
    return funcs[kind](**params)
