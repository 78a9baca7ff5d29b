"""Self-checks run by ``vdw-medium validate``.

Each check compares the library against a closed form or an independent
route and never raises: a failure of any kind becomes a failed check.
"""
from __future__ import annotations

import math
import traceback
from dataclasses import dataclass

import numpy as np
from scipy import integrate as sp_integrate

from . import energies as en
from .green import curl_green, dyadic_green, trace_curl_closed_form, trace_curlG_curlG
from .green import trace_GG, trace_GG_closed_form
from .kernels import ComplexResponse, Separation, dipole_tensor_ee, dipole_tensor_em, dipole_tensor_mm
from .kernels import LEVI_CIVITA, poly_F, poly_G, poly_P
from .materials import (
    LorentzPolarizability,
    LorentzTerm,
    Particle,
    ResponseModel,
    StaticPolarizability,
    TwoLevelPolarizability,
    VACUUM,
    two_level_dielectric,
)
from .quadrature import QuadratureConfig, integrate_semi_infinite


@dataclass
class CheckResult:
    name: str
    expected: str
    got: str
    tol: str
    passed: bool
    nonconverged: bool = False

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name}: expected {self.expected}, got {self.got}, tol {self.tol}"


class _NotConverged(Exception):
    pass


def _value(res):
    if not res.converged:
        raise _NotConverged(f"quadrature did not converge (err {res.error:.3g})")
    return res.value


def _worse(worst, dev):
    """Running maximum in which NaN counts as infinitely bad."""
    dev = float(dev)
    return math.inf if math.isnan(dev) else max(worst, dev)


def _rel(a, b):
    return abs(a - b) / abs(b) if b != 0 else abs(a)


# -- random configurations ----------------------------------------------------


def random_medium(rng, lossy=True):
    def terms(k):
        return tuple(LorentzTerm(rng.uniform(0.0, 2.0), rng.uniform(0.2, 3.0),
                                 rng.uniform(0.0, 0.5) if lossy else 0.0) for _ in range(k))
    return ResponseModel(terms(rng.integers(0, 3)), terms(rng.integers(0, 2)))


def random_polarizability(rng):
    kind = rng.integers(0, 3)
    if kind == 0:
        return StaticPolarizability(rng.uniform(0.1, 2.0))
    if kind == 1:
        return TwoLevelPolarizability(rng.uniform(0.2, 3.0), rng.uniform(0.1, 2.0))
    return LorentzPolarizability(tuple((rng.uniform(0.1, 2.0), rng.uniform(0.2, 3.0), rng.uniform(0.0, 0.5))
                                       for _ in range(rng.integers(1, 3))))


def random_particle(rng):
    return Particle(random_polarizability(rng), random_polarizability(rng))


PATH_MEDIA = (
    VACUUM,
    two_level_dielectric(3.0),
    ResponseModel((LorentzTerm(1.5, 0.8, 0.3),)),
    ResponseModel((LorentzTerm(1.0, 1.2, 0.1),), (LorentzTerm(0.9, 0.6, 0.2),)),
    ResponseModel((LorentzTerm(0.7, 0.3, 0.05), LorentzTerm(2.0, 4.0, 1.0)),
                  (LorentzTerm(1.5, 2.0, 0.0),)),
)

PATH_PARTICLES = (
    (Particle(StaticPolarizability(1.0), StaticPolarizability(0.3)),
     Particle(StaticPolarizability(0.7), StaticPolarizability(1.2))),
    (Particle(TwoLevelPolarizability(1.0, 1.0), TwoLevelPolarizability(0.5, 0.4)),
     Particle(TwoLevelPolarizability(2.0, 0.6), TwoLevelPolarizability(0.8, 1.1))),
    (Particle(LorentzPolarizability(((1.0, 1.0, 0.2), (0.5, 3.0, 0.0))), StaticPolarizability(0.2)),
     Particle(TwoLevelPolarizability(0.3, 2.0), LorentzPolarizability(((0.4, 0.7, 0.1),)))),
)


# -- checks -------------------------------------------------------------------


def check_casimir_polder_ee(cfg, quick):
    alpha = 1.0
    worst = 0.0
    for R in (50.0, 1e3, 1e5):
        q = en.InteractionQuery(Particle(StaticPolarizability(alpha)), Particle(StaticPolarizability(alpha)),
                                R, terms=("ee",), quad=cfg)
        worst = _worse(worst, _rel(_value(en.w_ee(q).quad), en.casimir_polder_ee(alpha, R)))
    return CheckResult("casimir_polder_ee", "-23 a^2/(4 pi R^7)", f"max rel dev {worst:.3g}", "1e-8",
                       worst <= 1e-8)


def check_casimir_polder_em(cfg, quick):
    worst = 0.0
    for R in (0.5, 20.0, 1e4):
        a = Particle(electric=StaticPolarizability(0.8))
        b = Particle(magnetic=StaticPolarizability(1.3))
        q = en.InteractionQuery(a, b, R, terms=("em",), quad=cfg)
        worst = _worse(worst, _rel(_value(en.w_em(q).quad), en.casimir_polder_em(0.8, 1.3, R)))
    return CheckResult("casimir_polder_em", "+7 ae am/(4 pi R^7)", f"max rel dev {worst:.3g}", "1e-8",
                       worst <= 1e-8)


def check_london(cfg, quick):
    ratios = {}
    for r in (1e-3, 1e-4):
        q = en.two_level_query(r, 0.0, cfg=cfg)
        ratios[r] = _value(en.w_ee(q).quad) / en.london(1.0, 1.0, r)
    d3, d4 = 1 - ratios[1e-3], 1 - ratios[1e-4]
    order = math.log10(d3 / d4) if d3 > 0 and d4 > 0 else float("nan")
    ok = 0.995 <= ratios[1e-3] <= 1.0 and 0.0 <= d4 <= d3 / 10
    return CheckResult("london_limit", "W/W_L in [0.995, 1], deviation at least linear in r",
                       f"W/W_L={ratios[1e-3]:.9f}, decay order {order:.3f}", "[0.995, 1.0]", ok)


def check_d_ratio(cfg, quick):
    cases = [
        (1e-4, 0.0, 1.0, 1e-3, False),
        (1e-4, 3.0, 0.125, 1e-3, False),
        (200.0, 0.0, 23 / (3 * math.pi), 0.01, True),
        (500.0, 3.0, en.large_r_medium(3.0), 0.01, True),
    ]
    got, ok = [], True
    for r, C, want, tol, times_r in cases:
        v = _value(en.d_ratio(r, C, cfg)) * (r if times_r else 1.0)
        dev = _rel(v, want) if times_r else abs(v - want)
        ok &= dev <= tol
        got.append(f"{v:.6g}")
    return CheckResult("d_ratio_limits", "1, 0.125, 23/3pi, 23/96pi", ", ".join(got), "1e-3 abs / 1% rel", ok)


def check_path_equivalence(cfg, quick):
    Rs = (0.05, 0.3, 1.0, 4.0, 25.0)
    media = PATH_MEDIA
    parts = PATH_PARTICLES
    if quick:
        Rs, media, parts = Rs[::2], media[::2], parts[:2]
    worst = 0.0
    for R in Rs:
        for med in media:
            for a, b in parts:
                q = en.InteractionQuery(a, b, R, med, method="both", quad=cfg)
                bd = en.w_total(q)
                if not bd.converged:
                    raise _NotConverged("quadrature did not converge")
                worst = _worse(worst, bd.path_discrepancy)
    n = len(Rs) * len(media) * len(parts)
    return CheckResult("path_equivalence", f"mode sum == Green trace ({n} configs, K=16pi^2)",
                       f"max rel dev {worst:.3g}", "1e-6", worst <= 1e-6)


def check_trace_identities(cfg, quick):
    rng = np.random.default_rng(6)
    # grid kept where e^{-x} stays far from underflow
    us = np.geomspace(1e-2, 3.0, 10)
    Rs = np.geomspace(0.05, 3.0, 10)
    media = (VACUUM, random_medium(rng), random_medium(rng))
    worst = 0.0
    for med in media:
        for R in Rs:
            sep = Separation(R, tuple(rng.normal(size=3)))
            dev = np.concatenate([
                trace_GG(us, sep, med) / trace_GG_closed_form(us, R, med) - 1,
                trace_curlG_curlG(us, sep, med) / trace_curl_closed_form(us, R, med) - 1,
            ])
            worst = _worse(worst, np.max(np.abs(dev)))
    return CheckResult("trace_identities", "component sums == closed forms", f"max rel dev {worst:.3g}",
                       "1e-10", worst <= 1e-10)


def check_signs(cfg, quick):
    rng = np.random.default_rng(7)
    n = 100 if quick else 1000
    bad = 0
    for _ in range(n):
        q = en.InteractionQuery(random_particle(rng), random_particle(rng), float(10 ** rng.uniform(-2, 2)),
                                random_medium(rng), quad=cfg)
        bd = en.w_total(q)
        if not bd.converged:
            raise _NotConverged("quadrature did not converge")
        bad += not (bd.W_ee < 0 and bd.W_mm < 0 and bd.W_em > 0)
    return CheckResult("sign_properties", f"{n} configs: W_ee<0, W_mm<0, W_em>0", f"{bad} violations", "0",
                       bad == 0)


def check_figure1(cfg, quick):
    rs = np.geomspace(0.01, 10.0, 20 if quick else 60)
    d0 = np.array([_value(en.d_ratio(r, 0.0, cfg)) for r in rs])
    d3 = np.array([_value(en.d_ratio(r, 3.0, cfg)) for r in rs])
    tail = rs >= 1.0
    ok = (np.all(d3 < d0) and np.all(d0 > 0) and np.all(d3 > 0)
          and np.all(np.diff(d0[tail]) < 0) and np.all(np.diff(d3[tail]) < 0))
    return CheckResult("figure1_structure", "D(r,3) < D(r,0), positive, decreasing for r>=1",
                       f"min D0-D3 {np.min(d0 - d3):.3g}", "strict", bool(ok))


def _fd_curl(freq, sep, med, h):
    """Fourth-order central-difference curl of the Green dyadic with respect to ``r_A``."""
    vec = sep.vector

    def g(shift):
        # r_A moves by +shift, so r_B - r_A moves by -shift
        return dyadic_green(freq, Separation.from_vector(vec - shift), med).values

    grads = []
    for e in np.eye(3) * h:
        grads.append((8 * (g(e) - g(-e)) - (g(2 * e) - g(-2 * e))) / (12 * h))
    return np.einsum("ilm,lmj->ij", LEVI_CIVITA, np.array(grads))


def check_curl(cfg, quick):
    rng = np.random.default_rng(9)
    worst = 0.0
    for k in range(20):
        med = random_medium(rng, lossy=True)
        R = float(10 ** rng.uniform(-1, 0.7))
        sep = Separation(R, tuple(rng.normal(size=3)))
        w = rng.uniform(0.1, 3.0)
        freq = complex(w) if k % 2 == 0 else 1j * w
        ana = curl_green(freq, sep, med, "left").values
        fd = _fd_curl(freq, sep, med, 1e-3 * R)
        worst = _worse(worst, np.max(np.abs(ana - fd)) / np.max(np.abs(ana)))
    return CheckResult("curl_finite_difference", "analytic curl == central FD", f"max rel dev {worst:.3g}",
                       "1e-6", worst <= 1e-6)


def check_polynomials(cfg, quick):
    rng = np.random.default_rng(10)
    x = rng.uniform(0, 50, 100)
    dev = float(np.max(np.abs(poly_F(2 * x) / (16 * poly_P(x)) - 1)))
    exact = poly_F(0.0) == 48 and poly_G(0.0) == 4 and poly_P(0.0) == 3
    return CheckResult("polynomial_identities", "F(2x)=16P(x); F(0)=48, G(0)=4, P(0)=3",
                       f"max rel dev {dev:.3g}, constants exact: {exact}", "1e-14", dev <= 1e-14 and exact)


def check_negative_index(cfg, quick):
    rng = np.random.default_rng(11)
    ok = True
    for _ in range(20):
        eps, mu = rng.uniform(0.2, 5.0, 2)
        n = math.sqrt(eps * mu)
        w = rng.uniform(0.1, 3.0)
        sep = Separation(rng.uniform(0.1, 5.0), tuple(rng.normal(size=3)))
        neg = ComplexResponse(-eps, -mu, -n, -1 / mu)
        pos = ComplexResponse(eps, mu, n, 1 / mu)
        for fn in (dipole_tensor_ee, dipole_tensor_mm, dipole_tensor_em):
            ok &= bool(np.array_equal(fn(w, sep, neg).values, fn(w, sep, pos).values))
    return CheckResult("negative_index_invariance", "identical tensors", "identical" if ok else "differ",
                       "exact", ok)


def check_quadrature(cfg, quick):
    cases = [(lambda u: np.exp(-u), 1.0), (lambda u: 1 / (1 + u * u) ** 2, math.pi / 4),
             (lambda u: u**4 * np.exp(-2 * u), 0.75)]
    qcfg = QuadratureConfig(rel_tol=min(cfg.rel_tol, 1e-12), abs_tol=cfg.abs_tol, max_depth=cfg.max_depth)
    dev = 0.0
    for f, want in cases:
        dev = max(dev, abs(_value(integrate_semi_infinite(f, 1.0, qcfg)) - want))
    rng = np.random.default_rng(12)
    honest = True
    for _ in range(50):
        a, p, b, q = rng.uniform(0.5, 2), rng.uniform(0, 4), rng.uniform(0.2, 5), rng.uniform(0, 3)

        def f(u, a=a, p=p, b=b, q=q):
            return a * u**p * np.exp(-b * u) / (1 + u * u) ** q
        res = integrate_semi_infinite(f, 1.0, cfg)
        ref = sp_integrate.quad(f, 0, np.inf, epsabs=0, epsrel=1e-13, limit=500)[0]
        honest &= res.converged and abs(res.value - ref) <= 10 * res.error
    return CheckResult("quadrature_honesty", "1, pi/4, 3/4; true err <= 10x estimate",
                       f"max abs dev {dev:.3g}, honest: {honest}", "1e-10", dev <= 1e-10 and honest)


CHECKS = (
    check_casimir_polder_ee,
    check_casimir_polder_em,
    check_london,
    check_d_ratio,
    check_path_equivalence,
    check_trace_identities,
    check_signs,
    check_figure1,
    check_curl,
    check_polynomials,
    check_negative_index,
    check_quadrature,
)


def run_checks(cfg=None, quick=False):
    cfg = cfg or QuadratureConfig()
    results = []
    for check in CHECKS:
        name = check.__name__.removeprefix("check_")
        try:
            results.append(check(cfg, quick))
        except _NotConverged as exc:
            results.append(CheckResult(name, "converged quadrature", str(exc), "-", False, True))
        except Exception as exc:  # any failure is a failed check, never a crash
            tb = traceback.format_exception_only(type(exc), exc)[-1].strip()
            results.append(CheckResult(name, "no error", tb, "-", False))
    return results
