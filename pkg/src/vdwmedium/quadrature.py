"""Adaptive integration over the semi-infinite imaginary-frequency axis.

The axis is mapped onto the unit interval with ``u = u0 t / (1 - t)`` and
the unit interval is refined panel by panel with the embedded
7-point Gauss / 15-point Kronrod pair.  The Kronrod sum is the panel value
and ``|K15 - G7|`` its error estimate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, QuadratureError

__all__ = ["QuadratureConfig", "QuadratureResult", "integrate_semi_infinite", "integrate_unit"]

# QUADPACK qk15 abscissae (non-negative half) and weights
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# full 15-node layout: negative half, centre, positive half
NODES = np.concatenate([-_XGK[:7], [0.0], _XGK[6::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:7], [_WGK[7]], _WGK[6::-1]])
GAUSS_WEIGHTS = np.zeros(15)
# Gauss nodes sit at the odd positions of the Kronrod abscissae
GAUSS_WEIGHTS[[1, 3, 5]] = _WG[:3]
GAUSS_WEIGHTS[7] = _WG[3]
GAUSS_WEIGHTS[[13, 11, 9]] = _WG[:3]

_EPS = np.finfo(float).eps
_N_INITIAL = 8


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and refinement limits.

    ``tail_tol`` is the per-panel error below which a panel is left alone
    (defaults to ``abs_tol``).  ``max_panels`` caps the work of a single call.
    """

    rel_tol: float = 1e-9
    abs_tol: float = 1e-14
    max_depth: int = 48
    tail_tol: float | None = None
    max_panels: int = 4000

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise DomainError("tolerances must be > 0")
        if self.max_depth < 4:
            raise DomainError("max_depth must be >= 4")
        if self.tail_tol is not None and self.tail_tol < 0:
            raise DomainError("tail_tol must be >= 0")

    @property
    def tail(self):
        return self.abs_tol if self.tail_tol is None else self.tail_tol


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error: float
    evaluations: int
    converged: bool

    def scaled(self, factor):
        """Result of integrating ``factor * f``."""
        return QuadratureResult(self.value * factor, self.error * abs(factor),
                                self.evaluations, self.converged)


ZERO_RESULT = QuadratureResult(0.0, 0.0, 0, True)


def _panels(g, lo, hi):
    """Kronrod value, error estimate for each panel ``[lo_i, hi_i]`` of ``g`` on (0, 1)."""
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    t = mid[:, None] + half[:, None] * NODES[None, :]
    vals = np.asarray(g(t.ravel()), dtype=float).reshape(t.shape)
    if not np.all(np.isfinite(vals)):
        bad = t[~np.isfinite(vals)][0]
        raise QuadratureError(f"integrand is not finite at mapped point t = {bad!r}")
    k = half * (vals @ KRONROD_WEIGHTS)
    gs = half * (vals @ GAUSS_WEIGHTS)
    mag = half * (np.abs(vals) @ KRONROD_WEIGHTS)
    floor = 50 * _EPS * mag
    return k, np.maximum(np.abs(k - gs), floor), floor


def integrate_unit(g, cfg=None):
    """Adaptive G7/K15 integral of a vectorized ``g`` over the open interval (0, 1).

    Every round evaluates all new panels in a single call of ``g``, so the
    summation order, and hence the result, is deterministic.
    """
    cfg = cfg or QuadratureConfig()
    edges = np.linspace(0.0, 1.0, _N_INITIAL + 1)
    lo, hi = edges[:-1], edges[1:]
    depth = np.zeros(_N_INITIAL, dtype=int)
    val, err, floor = _panels(g, lo, hi)
    nevals = 15 * len(lo)
    while True:
        total = math.fsum(val)
        est = math.fsum(err)
        target = max(cfg.rel_tol * abs(total), cfg.abs_tol)
        if est <= target:
            return QuadratureResult(total, est, nevals, True)
        rounding = math.fsum(floor)
        if rounding > target and est <= 2 * rounding:
            # the estimate is at the rounding floor, which exceeds the tolerance
            break
        splittable = depth < cfg.max_depth
        pick = splittable & (err > target / len(err)) & (err >= cfg.tail)
        if not pick.any():
            if not splittable.any():
                break
            # fall back to the worst panel that may still be refined
            pick = np.zeros_like(splittable)
            pick[np.argmax(np.where(splittable, err, -1.0))] = True
        if len(err) + pick.sum() > cfg.max_panels:
            break
        a, b = lo[pick], hi[pick]
        m = 0.5 * (a + b)
        new_lo = np.concatenate([a, m])
        new_hi = np.concatenate([m, b])
        nv, ne, nf = _panels(g, new_lo, new_hi)
        nevals += 15 * len(new_lo)
        keep = ~pick
        d = np.concatenate([depth[pick], depth[pick]]) + 1
        lo = np.concatenate([lo[keep], new_lo])
        hi = np.concatenate([hi[keep], new_hi])
        depth = np.concatenate([depth[keep], d])
        val = np.concatenate([val[keep], nv])
        err = np.concatenate([err[keep], ne])
        floor = np.concatenate([floor[keep], nf])
        order = np.argsort(lo, kind="stable")
        lo, hi, depth, val, err, floor = (x[order] for x in (lo, hi, depth, val, err, floor))
    return QuadratureResult(math.fsum(val), math.fsum(err), nevals, False)


def integrate_semi_infinite(f, u0, cfg=None):
    """Integrate ``f`` over ``(0, inf)``.

    Parameters
    ----------
    f : callable
        Vectorized integrand: takes an array of ``u`` and returns an array of
        the same shape.
    u0 : float
        Scale of the integrand's dominant support; half of the mapped
        interval lies below it.
    cfg : QuadratureConfig, optional

    Returns
    -------
    QuadratureResult
        ``converged`` is False when the tolerance could not be met within
        the depth or panel limits.
    """
    if not (math.isfinite(u0) and u0 > 0):
        raise DomainError("scale hint u0 must be finite and > 0")

    def g(t):
        s = 1.0 - t
        return f(u0 * t / s) * (u0 / (s * s))

    return integrate_unit(g, cfg)
