import math

import mpmath
import numpy as np
import pytest

from vdwmedium import energies as en
from vdwmedium.errors import DomainError
from vdwmedium.materials import (
    VACUUM,
    LorentzTerm,
    Particle,
    ResponseModel,
    StaticPolarizability,
    TwoLevelPolarizability,
)
from vdwmedium.validation import PATH_MEDIA, PATH_PARTICLES, random_medium, random_particle

E1 = Particle(electric=StaticPolarizability(1.0))
M1 = Particle(magnetic=StaticPolarizability(1.0))


def query(a, b, R, medium=VACUUM, **kw):
    return en.InteractionQuery(a, b, R, medium, **kw)


@pytest.mark.parametrize("R", [100.0, 1e4])
def test_casimir_polder_ee(R):
    a = Particle(electric=StaticPolarizability(0.6))
    b = Particle(electric=StaticPolarizability(1.7))
    got = en.w_ee(query(a, b, R)).value
    assert got == pytest.approx(en.casimir_polder_ee(0.6, R, 1.7), rel=1e-8)


@pytest.mark.parametrize("R", [0.5, 30.0])
def test_casimir_polder_em(R):
    a = Particle(electric=StaticPolarizability(0.8))
    b = Particle(magnetic=StaticPolarizability(1.3))
    got = en.w_em(query(a, b, R)).value
    assert got == pytest.approx(en.casimir_polder_em(0.8, 1.3, R), rel=1e-8)


def test_zero_polarizability_is_exactly_zero():
    zero = Particle()
    bd = en.w_total(query(zero, E1, 2.0))
    assert (bd.W_ee, bd.W_mm, bd.W_em, bd.W_total) == (0.0, 0.0, 0.0, 0.0)
    assert en.w_mm(query(M1, E1, 1.0)).value == 0.0
    assert en.w_em(query(E1, E1, 1.0)).value == 0.0


def test_london_ratio():
    q = en.two_level_query(1e-3, 0.0)
    ratio = en.w_ee(q).value / en.london(1.0, 1.0, 1e-3)
    assert 0.995 <= ratio <= 1.0


def test_mm_equals_ee_in_vacuum():
    a = Particle(TwoLevelPolarizability(1.0, 0.5), TwoLevelPolarizability(1.0, 0.5))
    b = Particle(StaticPolarizability(2.0), StaticPolarizability(2.0))
    q = query(a, b, 0.7)
    assert en.w_mm(q).value == pytest.approx(en.w_ee(q).value, rel=1e-14)


def test_eps_mu_duality():
    med = ResponseModel((LorentzTerm(1.3, 0.7),), (LorentzTerm(0.5, 2.0),))
    a = Particle(TwoLevelPolarizability(1.0, 0.5), TwoLevelPolarizability(0.4, 1.5))
    b = Particle(StaticPolarizability(2.0), TwoLevelPolarizability(3.0, 0.8))
    swap = Particle(a.magnetic, a.electric), Particle(b.magnetic, b.electric)
    mm = en.w_mm(query(a, b, 0.9, med)).value
    ee = en.w_ee(query(*swap, 0.9, med.swapped())).value
    assert mm == pytest.approx(ee, rel=1e-12)


def test_em_exchange_symmetry():
    med = PATH_MEDIA[3]
    a, b = PATH_PARTICLES[2]
    assert en.w_em(query(a, b, 1.3, med)).value == pytest.approx(en.w_em(query(b, a, 1.3, med)).value, rel=1e-12)


@pytest.mark.parametrize("R", [0.05, 1.0, 25.0])
@pytest.mark.parametrize("mi", range(len(PATH_MEDIA)))
def test_path_equivalence(R, mi):
    for a, b in PATH_PARTICLES:
        bd = en.w_total(query(a, b, R, PATH_MEDIA[mi], method="both"))
        assert bd.converged
        assert bd.path_discrepancy <= 1e-6


def test_mode_sum_against_mpmath():
    med = PATH_MEDIA[3]
    a, b = PATH_PARTICLES[1]
    R = 0.8

    def eps(u):
        return 1 + 1.0**2 / (1.2**2 + u * u + 0.1 * u)

    def mu(u):
        return 1 + 0.9**2 / (0.6**2 + u * u + 0.2 * u)

    def tl(w0, a0, u):
        return a0 * w0 * w0 / (w0 * w0 + u * u)

    def x(u):
        return 2 * mpmath.sqrt(eps(u) * mu(u)) * u * R

    def F(t):
        return t**4 + 4 * t**3 + 20 * t**2 + 48 * t + 48

    with mpmath.workdps(30):
        ee = mpmath.quad(lambda u: tl(1.0, 1.0, u) * tl(2.0, 0.6, u) / eps(u) ** 2 * F(x(u)) * mpmath.exp(-x(u)),
                         [0, 1, 10, mpmath.inf])
        em = mpmath.quad(lambda u: u * u * (tl(1.0, 1.0, u) * tl(0.8, 1.1, u) + tl(0.5, 0.4, u) * tl(2.0, 0.6, u))
                         * (x(u) + 2) ** 2 * mpmath.exp(-x(u)), [0, 1, 10, mpmath.inf])
    q = query(a, b, R, med)
    assert en.w_ee(q).value == pytest.approx(float(-ee / (16 * mpmath.pi * R**6)), rel=1e-9)
    assert en.w_em(q).value == pytest.approx(float(em / (4 * mpmath.pi * R**4)), rel=1e-9)


@pytest.mark.parametrize("r, C", [(1e-3, 0.0), (0.3, 3.0), (5.0, 1.0)])
def test_d_ratio_matches_w_ee(r, C):
    d = en.d_ratio(r, C).value
    w = en.w_ee(en.two_level_query(r, C, alpha0=0.7)).value
    assert d * en.london(1.0, 0.7, r) == pytest.approx(w, rel=1e-8)


def test_d_ratio_limits_and_figure_ordering():
    assert en.d_ratio(1e-4, 0.0).value == pytest.approx(1.0, abs=1e-3)
    assert en.d_ratio(1e-4, 3.0).value == pytest.approx(0.125, abs=1e-3)
    assert en.d_ratio(500.0, 3.0).value * 500 == pytest.approx(en.large_r_medium(3.0), rel=1e-2)
    assert en.large_r_medium(3.0) == pytest.approx(23 / (96 * math.pi), rel=1e-15)
    rs = np.geomspace(0.01, 10, 15)
    d0 = np.array([en.d_ratio(r, 0.0).value for r in rs])
    d3 = np.array([en.d_ratio(r, 3.0).value for r in rs])
    assert np.all(d3 < d0) and np.all(d3 > 0)


@pytest.mark.parametrize("a, b", [(E1, E1), (M1, M1)])
def test_monotonic_decay_single_channel(a, b):
    med = PATH_MEDIA[4]
    Rs = np.geomspace(0.05, 50, 20)
    w = [abs(en.w_total(query(a, b, R, med)).W_total) for R in Rs]
    assert np.all(np.diff(w) < 0)


def test_random_sign_properties():
    rng = np.random.default_rng(77)
    for _ in range(60):
        q = query(random_particle(rng), random_particle(rng), float(10 ** rng.uniform(-2, 2)), random_medium(rng))
        bd = en.w_total(q)
        assert bd.converged
        assert bd.W_ee < 0 and bd.W_mm < 0 and bd.W_em > 0


def test_term_selection():
    bd = en.w_total(query(M1, E1, 1.5, terms=("ee", "em")))
    assert bd.W_ee == 0.0 and bd.W_mm == 0.0
    assert bd.W_total == bd.W_em > 0
    both = Particle(StaticPolarizability(1.0), StaticPolarizability(1.0))
    full = en.w_total(query(both, both, 1.5))
    assert full.W_total == pytest.approx(full.W_ee + full.W_mm + full.W_em, rel=1e-15)


def test_query_validation():
    with pytest.raises(DomainError):
        query(E1, E1, 0.0)
    with pytest.raises(DomainError):
        query(E1, E1, 1.0, terms=())
    with pytest.raises(DomainError):
        query(E1, E1, 1.0, method="fast")
    with pytest.raises(DomainError):
        en.d_ratio(-1.0, 0.0)
    with pytest.raises(DomainError):
        en.limit_oracle("nope")


def test_limit_oracle_dispatch():
    assert en.limit_oracle("london", w0=2.0, alpha0=1.0, R=1.0) == -1.5
    assert en.limit_oracle("casimir_polder_em", alpha_e=1.0, alpha_m=1.0, R=1.0) == 7 / (4 * math.pi)
