"""Response models of the host medium and of the guest particles.

Everything is in natural units (hbar = c = 1) with frequencies measured in
a caller-chosen reference frequency.  The imaginary-axis continuation of a
damped Lorentz term is

    wp**2 / (w0**2 + gamma*u + u**2),

which is real, positive and non-increasing in ``u``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import DomainError, SingularityError, SpecError

__all__ = [
    "LorentzTerm",
    "ResponseModel",
    "ComplexResponse",
    "VACUUM",
    "two_level_dielectric",
    "lorentz_sum",
    "eps_iu",
    "mu_iu",
    "n_iu",
    "response_complex",
    "group_index",
    "StaticPolarizability",
    "TwoLevelPolarizability",
    "LorentzPolarizability",
    "alpha_iu",
    "Particle",
    "medium_from_spec",
    "polarizability_from_spec",
    "particle_from_spec",
]


@dataclass(frozen=True)
class LorentzTerm:
    """One oscillator ``wp**2 / (w0**2 - w**2 - i*gamma*w)``."""

    wp: float
    w0: float
    gamma: float = 0.0

    def __post_init__(self):
        for name in ("wp", "w0", "gamma"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"LorentzTerm.{name} must be finite")
        if self.wp < 0:
            raise DomainError("LorentzTerm.wp must be >= 0")
        if self.w0 <= 0:
            raise DomainError("LorentzTerm.w0 must be > 0")
        if self.gamma < 0:
            raise DomainError("LorentzTerm.gamma must be >= 0")


@dataclass(frozen=True)
class ResponseModel:
    """Permittivity and permeability as sums of Lorentz oscillators.

    An empty term list means the vacuum value 1.
    """

    eps_terms: tuple[LorentzTerm, ...] = ()
    mu_terms: tuple[LorentzTerm, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "eps_terms", tuple(self.eps_terms))
        object.__setattr__(self, "mu_terms", tuple(self.mu_terms))

    @property
    def is_vacuum(self):
        return not any(t.wp > 0 for t in self.eps_terms + self.mu_terms)

    @property
    def is_lossless(self):
        return all(t.gamma == 0 for t in self.eps_terms + self.mu_terms)

    def swapped(self):
        """Return the dual medium with permittivity and permeability exchanged."""
        return ResponseModel(self.mu_terms, self.eps_terms)


VACUUM = ResponseModel()


def two_level_dielectric(C, w0=1.0):
    """Dielectric of two-level host atoms with ``eps(i*w0*y) = 1 + C/(y**2+1)``.

    ``C`` absorbs the host density and transition dipole; ``mu = 1``.
    """
    if not (math.isfinite(C) and C >= 0):
        raise DomainError("coupling C must be finite and >= 0")
    if C == 0:
        return VACUUM
    return ResponseModel((LorentzTerm(math.sqrt(C) * w0, w0, 0.0),))


class ComplexResponse(NamedTuple):
    eps: complex
    mu: complex
    n: complex
    kappa: complex


def lorentz_sum(terms, omega):
    """``1 + sum wp**2/(w0**2 - omega**2 - i*gamma*omega)`` at complex ``omega``.

    No validation; ``omega = 1j*u`` reproduces the imaginary-axis value.
    """
    omega = np.asarray(omega, dtype=complex)
    out = np.ones_like(omega)
    for t in terms:
        out = out + t.wp**2 / (t.w0**2 - omega**2 - 1j * t.gamma * omega)
    return out if out.ndim else complex(out)


def _check_u(u):
    u = np.asarray(u, dtype=float)
    if not np.all(np.isfinite(u)):
        raise DomainError("imaginary frequency must be finite")
    if np.any(u < 0):
        raise DomainError("imaginary frequency must be >= 0")
    return u


def _lorentz_iu(terms, u):
    out = np.ones_like(u)
    for t in terms:
        out = out + t.wp**2 / (t.w0**2 + t.gamma * u + u * u)
    return out


def _scalar_or_array(x):
    return float(x) if np.ndim(x) == 0 else x


def eps_iu(model, u):
    """Permittivity on the imaginary axis, ``eps(iu) >= 1``. Accepts arrays."""
    u = _check_u(u)
    return _scalar_or_array(_lorentz_iu(model.eps_terms, u))


def mu_iu(model, u):
    """Permeability on the imaginary axis, ``mu(iu) >= 1``. Accepts arrays."""
    u = _check_u(u)
    return _scalar_or_array(_lorentz_iu(model.mu_terms, u))


def n_iu(model, u):
    """Refractive index ``sqrt(eps(iu) mu(iu))`` on the imaginary axis."""
    u = _check_u(u)
    e = _lorentz_iu(model.eps_terms, u)
    m = _lorentz_iu(model.mu_terms, u)
    return _scalar_or_array(np.sqrt(e * m))


def _terms_complex(terms, w):
    re = 1.0
    im = 0.0
    for t in terms:
        a = t.w0**2 - w * w
        b = t.gamma * w
        den = a * a + b * b
        if den == 0:
            raise SingularityError(f"lossless resonance hit at w = {w!r}")
        re += t.wp**2 * a / den
        im += t.wp**2 * b / den
    # +0.0 normalises a negative zero so the branch cut is approached from above
    return complex(re, im + 0.0)


def response_complex(model, w):
    """Complex ``eps``, ``mu``, ``n`` and ``kappa = 1/mu`` at real frequency ``w``.

    ``n = sqrt(eps) * sqrt(mu)`` with principal roots, which keeps
    ``Im n >= 0`` for a passive medium and gives ``n < 0`` when both
    ``eps`` and ``mu`` are negative and real.
    """
    if not (math.isfinite(w) and w > 0):
        raise DomainError("real frequency must be finite and > 0")
    eps = _terms_complex(model.eps_terms, w)
    mu = _terms_complex(model.mu_terms, w)
    n = complex(np.sqrt(eps) * np.sqrt(mu))
    return ComplexResponse(eps, mu, n, 1.0 / mu)


def _terms_derivative(terms, w):
    d = 0j
    for t in terms:
        den = t.w0**2 - w * w - 1j * t.gamma * w
        d += t.wp**2 * (2 * w + 1j * t.gamma) / den**2
    return d


def group_index(model, w):
    """Group index ``n + w dn/dw`` from the analytic derivative of the Lorentz sums.

    Real for a lossless model; a complex value is returned when damping
    makes it complex.
    """
    r = response_complex(model, w)
    if r.n == 0:
        raise SingularityError("refractive index vanishes; group index undefined")
    deps = _terms_derivative(model.eps_terms, w)
    dmu = _terms_derivative(model.mu_terms, w)
    dn = (deps * r.mu + r.eps * dmu) / (2 * r.n)
    g = r.n + w * dn
    return g.real if g.imag == 0 else g


# -- particle polarizabilities ------------------------------------------------


@dataclass(frozen=True)
class StaticPolarizability:
    """Frequency-independent polarizability ``alpha0``."""

    alpha0: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.alpha0) or self.alpha0 < 0:
            raise DomainError("static polarizability must be finite and >= 0")

    @property
    def scale(self):
        return None

    @property
    def is_zero(self):
        return self.alpha0 == 0

    def at_iu(self, u):
        return np.full_like(np.asarray(u, dtype=float), self.alpha0)


@dataclass(frozen=True)
class TwoLevelPolarizability:
    """``alpha(iu) = alpha0 * w0**2 / (w0**2 + u**2)``."""

    w0: float
    alpha0: float

    def __post_init__(self):
        if not (math.isfinite(self.w0) and self.w0 > 0):
            raise DomainError("transition frequency w0 must be > 0")
        if not math.isfinite(self.alpha0) or self.alpha0 < 0:
            raise DomainError("static polarizability alpha0 must be >= 0")

    @property
    def scale(self):
        return self.w0

    @property
    def is_zero(self):
        return self.alpha0 == 0

    def at_iu(self, u):
        u = np.asarray(u, dtype=float)
        return self.alpha0 * self.w0**2 / (self.w0**2 + u * u)


@dataclass(frozen=True)
class LorentzPolarizability:
    """Sum of oscillators ``sum strength/(w0**2 + gamma*u + u**2)``.

    ``terms`` holds ``(strength, w0, gamma)`` triples.  The static value is
    ``sum strength/w0**2``.
    """

    terms: tuple[tuple[float, float, float], ...] = field(default=())

    def __post_init__(self):
        terms = tuple(tuple(float(v) for v in t) for t in self.terms)
        for s, w0, g in terms:
            if not (s >= 0 and w0 > 0 and g >= 0):
                raise DomainError("Lorentz polarizability needs strength>=0, w0>0, gamma>=0")
        object.__setattr__(self, "terms", terms)

    @property
    def scale(self):
        return min((w0 for s, w0, g in self.terms if s > 0), default=None)

    @property
    def is_zero(self):
        return all(s == 0 for s, _, _ in self.terms)

    def at_iu(self, u):
        u = np.asarray(u, dtype=float)
        out = np.zeros_like(u)
        for s, w0, g in self.terms:
            out = out + s / (w0 * w0 + g * u + u * u)
        return out


def alpha_iu(model, u):
    """Polarizability on the imaginary frequency axis."""
    u = _check_u(u)
    return _scalar_or_array(model.at_iu(u))


ZERO = StaticPolarizability(0.0)


@dataclass(frozen=True)
class Particle:
    """A guest particle with electric and magnetic polarizabilities."""

    electric: object = ZERO
    magnetic: object = ZERO


# -- JSON specs ---------------------------------------------------------------


def _number(spec, key, path):
    if key not in spec:
        raise SpecError(f"{path}.{key}", "missing")
    v = spec[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise SpecError(f"{path}.{key}", f"expected a number, got {v!r}")
    if not math.isfinite(v):
        raise SpecError(f"{path}.{key}", "must be finite")
    return float(v)


def _terms(spec, path):
    if not isinstance(spec, dict) or "terms" not in spec:
        raise SpecError(path, 'expected {"terms": [...]}')
    terms = spec["terms"]
    if not isinstance(terms, list):
        raise SpecError(f"{path}.terms", "expected a list")
    out = []
    for i, t in enumerate(terms):
        p = f"{path}.terms[{i}]"
        if not isinstance(t, dict):
            raise SpecError(p, "expected an object")
        try:
            out.append(LorentzTerm(_number(t, "wp", p), _number(t, "w0", p),
                                   _number(t, "gamma", p) if "gamma" in t else 0.0))
        except DomainError as exc:
            raise SpecError(p, str(exc)) from None
    return tuple(out)


def medium_from_spec(spec, path="medium"):
    """Build a :class:`ResponseModel` from its JSON form.

    Accepted shapes::

        {"eps": {"terms": [{"wp": .., "w0": .., "gamma": ..}]}, "mu": {...}}
        {"two_level_dielectric": {"C": ..}}
        "vacuum"
    """
    if spec == "vacuum" or spec == {}:
        return VACUUM
    if not isinstance(spec, dict):
        raise SpecError(path, "expected an object")
    if "two_level_dielectric" in spec:
        sub = spec["two_level_dielectric"]
        p = f"{path}.two_level_dielectric"
        if not isinstance(sub, dict):
            raise SpecError(p, "expected an object")
        C = _number(sub, "C", p)
        w0 = _number(sub, "w0", p) if "w0" in sub else 1.0
        try:
            return two_level_dielectric(C, w0)
        except DomainError as exc:
            raise SpecError(p, str(exc)) from None
    unknown = set(spec) - {"eps", "mu"}
    if unknown:
        raise SpecError(f"{path}.{sorted(unknown)[0]}", "unknown key")
    eps = _terms(spec["eps"], f"{path}.eps") if "eps" in spec else ()
    mu = _terms(spec["mu"], f"{path}.mu") if "mu" in spec else ()
    return ResponseModel(eps, mu)


def polarizability_from_spec(spec, path="alpha"):
    """``{"static": a}``, ``{"two_level": {"w0": .., "alpha0": ..}}`` or
    ``{"lorentz": {"terms": [[strength, w0, gamma], ...]}}``."""
    if not isinstance(spec, dict) or len(spec) != 1:
        raise SpecError(path, 'expected exactly one of "static", "two_level", "lorentz"')
    (kind, value), = spec.items()
    try:
        if kind == "static":
            return StaticPolarizability(_number(spec, "static", path))
        if kind == "two_level":
            p = f"{path}.two_level"
            if not isinstance(value, dict):
                raise SpecError(p, "expected an object")
            return TwoLevelPolarizability(_number(value, "w0", p), _number(value, "alpha0", p))
        if kind == "lorentz":
            p = f"{path}.lorentz"
            if not isinstance(value, dict) or not isinstance(value.get("terms"), list):
                raise SpecError(p, 'expected {"terms": [[strength, w0, gamma], ...]}')
            return LorentzPolarizability(tuple(tuple(t) for t in value["terms"]))
    except (DomainError, TypeError) as exc:
        raise SpecError(path, str(exc)) from None
    raise SpecError(f"{path}.{kind}", "unknown polarizability kind")


def particle_from_spec(spec, path="atom"):
    """A particle: ``{"electric": <alpha spec>, "magnetic": <alpha spec>}``.

    Either key may be omitted (zero polarizability).  A bare polarizability
    spec is read as purely electric.
    """
    if not isinstance(spec, dict):
        raise SpecError(path, "expected an object")
    if set(spec) & {"static", "two_level", "lorentz"}:
        return Particle(electric=polarizability_from_spec(spec, path))
    unknown = set(spec) - {"electric", "magnetic"}
    if unknown:
        raise SpecError(f"{path}.{sorted(unknown)[0]}", "unknown key")
    e = polarizability_from_spec(spec["electric"], f"{path}.electric") if "electric" in spec else ZERO
    m = polarizability_from_spec(spec["magnetic"], f"{path}.magnetic") if "magnetic" in spec else ZERO
    return Particle(e, m)
