import cmath
import math

import pytest
from hypothesis import given, strategies as st

from pv5.cover import (
    CoverPoint,
    DomainKind,
    DomainSpec,
    SpiralCurve,
    cover_pow,
    in_domain,
    spiral_solve,
)
from pv5.errors import DegenerateSigma


def test_half_turn_past_the_cut():
    x = CoverPoint(0.0, 2.0 * math.pi)
    assert cover_pow(x, 0.5) == pytest.approx(-1.0)


def test_unit_point_any_exponent():
    x = CoverPoint(0.0, 0.0)
    assert cover_pow(x, 2.3 - 0.7j) == 1.0


def test_pow_against_high_precision_oracle():
    # 50-digit oracle value of exp((0.3+0.4i)(-1+3i)), frozen.
    expected = complex(
        0.1958151375780682,
        0.10697429720800304,
    )
    import mpmath

    mpmath.mp.dps = 50
    oracle = mpmath.exp(mpmath.mpc("0.3", "0.4") * mpmath.mpc(-1, 3))
    assert abs(complex(oracle) - expected) < 1e-15
    got = cover_pow(CoverPoint(-1.0, 3.0), 0.3 + 0.4j)
    assert got == pytest.approx(expected, rel=1e-13)


@given(
    st.floats(-3, 3),
    st.floats(-20, 20),
    st.complex_numbers(max_magnitude=4, allow_nan=False, allow_infinity=False),
    st.complex_numbers(max_magnitude=4, allow_nan=False, allow_infinity=False),
)
def test_pow_additive_in_exponent(lnr, arg, s, t):
    x = CoverPoint(lnr, arg)
    lhs = cover_pow(x, s + t)
    rhs = cover_pow(x, s) * cover_pow(x, t)
    assert cmath.isclose(lhs, rhs, rel_tol=1e-12)


def test_omega_plus_example_false():
    # sigma=i, rho=1, eps0=e^-2: inequality 0*(-10)+0+2 < 1*(-6) fails.
    d = DomainSpec(DomainKind.OMEGA_PLUS, sigma=1j, rho=1.0, eps0=math.exp(-2))
    assert not in_domain(CoverPoint(-10.0, -6.0), d)


def test_omega_plus_example_true_point():
    d = DomainSpec(DomainKind.OMEGA_PLUS, sigma=1j, rho=1.0, eps0=math.exp(-2))
    # need 2 < arg < -lnr - 2: take lnr=-10, arg=6
    assert in_domain(CoverPoint(-10.0, 6.0), d)


def test_deven_requires_small_modulus():
    d = DomainSpec(DomainKind.D_EVEN, sigma=0.3 + 0.4j, rho=1.0, eps0=0.1)
    # |x| >= eps0**2 can still fail the first inequality |x| < eps0
    x = CoverPoint(math.log(0.2), 0.0)  # |x| = 0.2 > eps0
    assert not in_domain(x, d)


def test_real_sigma_degenerate_band():
    # Im sigma = 0: membership reduces to bands in log|x| alone.
    d = DomainSpec(DomainKind.OMEGA_PLUS, sigma=0.5, rho=1.0, eps0=0.05)
    l1 = -math.log(0.05)
    # 0.5*lr + l1 < 0 < -0.5*lr - l1  <=>  lr < -2*l1
    assert in_domain(CoverPoint(-2.1 * l1 / 0.5 - 1.0, 123.0), d)
    assert not in_domain(CoverPoint(-1.0, 123.0), d)


def test_domain_monotone_under_shrinking_modulus():
    d = DomainSpec(DomainKind.OMEGA, sigma=0.3 + 0.4j, rho=1.0, eps0=0.05)
    # along the ray arg = Re(sigma)/Im(sigma) * lnr the band inequality is
    # scale invariant, so once inside, shrinking |x| keeps us inside
    slope = d.sigma.real / d.sigma.imag
    inside = [t for t in range(5, 50) if in_domain(CoverPoint(-t, -t * slope), d)]
    if inside:
        t0 = inside[0]
        assert all(in_domain(CoverPoint(-t, -t * slope), d) for t in range(t0, 50))


def test_d_domains_tile_punctured_neighbourhood():
    import random

    rng = random.Random(7)
    sigma, rho, eps0 = 0.3 + 0.4j, 1.0, 0.05
    kinds = (DomainKind.D_EVEN, DomainKind.D_ODD, DomainKind.D_PLUS, DomainKind.D_MINUS)
    for _ in range(300):
        lnr = rng.uniform(math.log(eps0**2) - 30.0, math.log(eps0**2))
        arg = rng.uniform(-80.0, 80.0)
        x = CoverPoint(lnr, arg)
        hit = any(
            in_domain(x, DomainSpec(k, sigma=sigma, rho=rho, eps0=eps0 * 1.0001, nu=nu))
            for k in kinds
            for nu in range(-40, 41)
        )
        assert hit, (lnr, arg)


def test_d_domains_pairwise_disjoint():
    import random

    rng = random.Random(11)
    sigma, rho, eps0 = 0.3 + 0.4j, 1.0, 0.05
    kinds = (DomainKind.D_EVEN, DomainKind.D_ODD, DomainKind.D_PLUS, DomainKind.D_MINUS)
    for _ in range(200):
        lnr = rng.uniform(-40.0, math.log(eps0**2))
        arg = rng.uniform(-60.0, 60.0)
        x = CoverPoint(lnr, arg)
        hits = [
            (k, nu)
            for k in kinds
            for nu in range(-40, 41)
            if in_domain(x, DomainSpec(k, sigma=sigma, rho=rho, eps0=eps0, nu=nu))
        ]
        assert len(hits) <= 1, (lnr, arg, hits)


def test_spiral_solve_is_linear_solve():
    import numpy as np

    sigma, r0, mu = 1.0 + 1.0j, 1.0, 0.0
    curve = SpiralCurve(r0=r0, mu=mu, omega=1.0, sigma=sigma)
    n = 2
    p = spiral_solve(curve, n)
    s = curve.exponent
    mat = np.array([[s.real, -s.imag], [abs(s) ** 2, 0.0]])
    rhs = np.array([r0, r0 * s.real + mu * s.imag - 2 * math.pi * n * abs(s.imag)])
    sol = np.linalg.solve(mat, rhs)
    assert p.lnr == pytest.approx(sol[0], rel=1e-14)
    assert p.arg == pytest.approx(sol[1], rel=1e-14)


def test_spiral_unit_sigma_example():
    curve = SpiralCurve(r0=0.0, mu=0.0, omega=1.0, sigma=1j)
    p = spiral_solve(curve, 1)
    assert p.lnr == pytest.approx(-2.0 * math.pi)
    # on the curve: Re(s) lnr - Im(s) arg = 0 with s = i gives arg = 0
    assert p.arg == pytest.approx(0.0, abs=1e-14)


def test_spiral_step_and_projection_invariance():
    curve = SpiralCurve(r0=0.4, mu=1.1, omega=1.0, sigma=0.3 + 0.4j)
    s = curve.exponent
    pts = [spiral_solve(curve, n) for n in (1, 2, 3)]
    step = 2 * math.pi * abs(s.imag) / abs(s) ** 2
    assert pts[1].lnr - pts[0].lnr == pytest.approx(-step)
    assert pts[2].lnr - pts[1].lnr == pytest.approx(-step)
    vals = [cover_pow(p, s) for p in pts]
    assert vals[0] == pytest.approx(vals[1], rel=1e-12)
    assert vals[1] == pytest.approx(vals[2], rel=1e-12)
    assert vals[0] == pytest.approx(cmath.exp(complex(curve.r0, curve.mu)), rel=1e-12)


def test_spiral_solve_degenerate():
    with pytest.raises(DegenerateSigma):
        spiral_solve(SpiralCurve(0.0, 0.0, 1.0, 0.5), 1)
