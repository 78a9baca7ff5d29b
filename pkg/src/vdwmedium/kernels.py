"""Scalar polynomials, real-frequency dipole-dipole tensors and mode correlators.

The tensors are lossless objects: they need real ``eps``, ``mu`` and ``n``.
Negative-index points are handled by evaluating with ``|n|``, ``|eps|`` and
``|mu|``, which leaves the dipole-dipole interaction unchanged when all three
flip sign together; :attr:`Dyadic.abs_substituted` records that it happened.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ModelError, SingularityError
from .materials import ComplexResponse, group_index, response_complex

LEVI_CIVITA = np.zeros((3, 3, 3))
for _i, _j, _k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    LEVI_CIVITA[_i, _j, _k] = 1.0
    LEVI_CIVITA[_j, _i, _k] = -1.0

# relative size of an imaginary part still treated as round-off
_LOSSLESS_RTOL = 1e-12


def poly_F(x):
    """``x**4 + 4x**3 + 20x**2 + 48x + 48``."""
    x = np.asarray(x, dtype=float)
    out = (((x + 4.0) * x + 20.0) * x + 48.0) * x + 48.0
    return float(out) if out.ndim == 0 else out


def poly_G(x):
    """``(x + 2)**2``."""
    x = np.asarray(x, dtype=float)
    out = (x + 2.0) ** 2
    return float(out) if out.ndim == 0 else out


def poly_P(x):
    """``x**4 + 2x**3 + 5x**2 + 6x + 3``; ``poly_F(2x) == 16*poly_P(x)``."""
    x = np.asarray(x, dtype=float)
    out = (((x + 2.0) * x + 5.0) * x + 6.0) * x + 3.0
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class Separation:
    """Vector ``R = r_B - r_A`` split into length and unit direction."""

    R: float
    direction: tuple[float, float, float] = (0.0, 0.0, 1.0)

    def __post_init__(self):
        if not math.isfinite(self.R):
            raise DomainError("separation must be finite")
        if self.R == 0:
            raise SingularityError("coincident points: R = 0")
        if self.R < 0:
            raise DomainError("separation R must be > 0")
        d = np.asarray(self.direction, dtype=float)
        norm = np.linalg.norm(d)
        if d.shape != (3,) or norm == 0:
            raise DomainError("direction must be a nonzero 3-vector")
        object.__setattr__(self, "direction", tuple(float(v) for v in d / norm))

    @classmethod
    def from_vector(cls, vec):
        vec = np.asarray(vec, dtype=float)
        R = float(np.linalg.norm(vec))
        if R == 0:
            raise SingularityError("coincident points: R = 0")
        return cls(R, tuple(vec / R))

    @property
    def unit(self):
        return np.array(self.direction)

    @property
    def vector(self):
        return self.R * self.unit


@dataclass(frozen=True)
class Dyadic:
    """A 3x3 tensor together with the separation it was evaluated at."""

    values: np.ndarray
    sep: Separation
    abs_substituted: bool = False

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.values, dtype=dtype)

    def __getitem__(self, idx):
        return self.values[idx]

    @property
    def T(self):
        return self.values.T


def _real_response(w, medium):
    """Real ``(eps, mu, n)`` at ``w`` plus a flag telling whether any was negative."""
    r = medium if isinstance(medium, ComplexResponse) else response_complex(medium, w)
    vals = []
    for v in (r.eps, r.mu, r.n):
        v = complex(v)
        if abs(v.imag) > _LOSSLESS_RTOL * max(abs(v), 1.0):
            raise ModelError("dipole tensors need a lossless (real) response")
        vals.append(v.real)
    flipped = any(v < 0 for v in vals)
    eps, mu, n = (abs(v) for v in vals)
    return eps, mu, n, flipped


def _check_w(w):
    if not (math.isfinite(w) and w > 0):
        raise DomainError("real frequency must be finite and > 0")


def _symmetric_tensor(w, sep, scale, n):
    kR = n * w * sep.R
    rr = np.outer(sep.unit, sep.unit)
    eye = np.eye(3)
    c, s = math.cos(kR), math.sin(kR)
    return ((eye - 3 * rr) * (c + kR * s) - (eye - rr) * kR * kR * c) / (scale * sep.R**3)


def dipole_tensor_ee(w, sep, medium):
    """Electric dipole-dipole interaction tensor at real frequency ``w``.

    ``medium`` is a :class:`~vdwmedium.materials.ResponseModel` or an
    explicit :class:`~vdwmedium.materials.ComplexResponse`.
    """
    _check_w(w)
    eps, mu, n, flipped = _real_response(w, medium)
    return Dyadic(_symmetric_tensor(w, sep, eps, n), sep, flipped)


def dipole_tensor_mm(w, sep, medium):
    """Magnetic counterpart of :func:`dipole_tensor_ee` (``eps`` replaced by ``mu``)."""
    _check_w(w)
    eps, mu, n, flipped = _real_response(w, medium)
    return Dyadic(_symmetric_tensor(w, sep, mu, n), sep, flipped)


def dipole_tensor_em(w, sep, medium):
    """Antisymmetric electric-magnetic interaction tensor.

    ``w**3 n**2 eps_ijp Rhat_p [sin(kR)/(kR)**2 - cos(kR)/(kR)]``.  The overall
    sign is the one printed with the tensor; the repulsive sign of the mixed
    energy is fixed downstream in :mod:`vdwmedium.energies`.
    """
    _check_w(w)
    eps, mu, n, flipped = _real_response(w, medium)
    kR = n * w * sep.R
    radial = math.sin(kR) / kR**2 - math.cos(kR) / kR
    vals = w**3 * n * n * np.einsum("ijp,p->ij", LEVI_CIVITA, sep.unit) * radial
    return Dyadic(vals, sep, flipped)


def correlator_kernel(field_pair, w, sep, medium, k_hat):
    """Polarization-summed vacuum correlator of one plane-wave mode.

    The quantization volume is stripped (density form) and hbar = 1.
    ``field_pair`` is ``"EE"``, ``"HH"`` or ``"EH"``; ``k_hat`` is the mode
    direction.
    """
    _check_w(w)
    eps, mu, n, _ = _real_response(w, medium)
    g = group_index(medium, w) if not isinstance(medium, ComplexResponse) else None
    if g is None:
        raise ModelError("correlator needs a ResponseModel to evaluate the group index")
    if isinstance(g, complex) or g <= 0:
        raise ModelError(f"group index {g!r} is not positive (anomalous dispersion)")
    kh = np.asarray(k_hat, dtype=float)
    kh = kh / np.linalg.norm(kh)
    phase = np.exp(-1j * n * w * np.dot(kh, sep.vector))
    field_pair = field_pair.upper()
    if field_pair == "EE":
        vals = 2 * math.pi * w * mu / (n * g) * (np.eye(3) - np.outer(kh, kh)) * phase
    elif field_pair == "HH":
        vals = 2 * math.pi * n * w / (mu * g) * (np.eye(3) - np.outer(kh, kh)) * phase
    elif field_pair == "EH":
        vals = 2 * math.pi * w / g * np.einsum("ijl,l->ij", LEVI_CIVITA, kh) * phase
    else:
        raise DomainError(f"unknown field pair {field_pair!r}")
    return Dyadic(vals, sep)
