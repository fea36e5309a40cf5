import cmath
import math

import numpy as np
import pytest

from conftest import band_point, random_sigma, random_theta
from pv5.cover import CoverPoint, DomainKind, DomainSpec, in_domain
from pv5.errors import ExcludedParameters, OutOfDomain, SingularValue, ZeroA
from pv5.families import (
    Family,
    IlogVariant,
    SpecialKind,
    build_ilog,
    build_power_generic,
    build_power_special,
    build_tanh,
    build_taylor,
    c_leading,
    pv_residual,
    residual_scale,
)
from pv5.theta import Theta

TH = Theta.of(1 / 3, 1 / 5, 1 / 7)
SIGMA = 0.3 + 0.4j


def admissible(th, sigma):
    t0, tx, ti = th.as_tuple()
    vals = [sigma**2 - (t0 + tx) ** 2, sigma**2 - (t0 - tx) ** 2, sigma**2 - ti**2]
    return all(abs(v) > 1e-3 for v in vals) and abs(sigma + ti) > 1e-3


def test_generic_leading_coefficients_random(rng):
    for _ in range(50):
        th = random_theta(rng)
        sigma = random_sigma(rng)
        if not admissible(th, sigma):
            continue
        t0, tx, ti = th.as_tuple()
        h = build_power_generic(th, sigma, 1.0, n_max=6)
        got_p = h.expansions["plus"].term(0, 1)
        want_p = c_leading(th, sigma)
        assert abs(got_p - want_p) <= 1e-10 * max(1, abs(want_p))
        got_m = h.expansions["minus"].term(0, -1)
        want_m = -4 * sigma**2 * (t0 + tx + sigma) / (
            (sigma - ti) * (t0**2 - (sigma - tx) ** 2)
        )
        assert abs(got_m - want_m) <= 1e-10 * max(1, abs(want_m))
        assert abs(h.expansions["plus"].term(0, 0) - 1) < 1e-12
        assert abs(h.expansions["minus"].term(0, 0) - 1) < 1e-12


def test_generic_ratio_factor_displays(panel):
    t0, tx, ti = TH.as_tuple()
    s = SIGMA
    h = build_power_generic(TH, SIGMA, 1.0, n_max=8)
    n11, d11 = h.num11, h.den11
    assert n11.term(0, 0) == pytest.approx(4 * t0 * s**2 - 2 * ti * (s**2 + t0**2 - tx**2), rel=1e-12)
    assert n11.term(0, 1) == pytest.approx(-(s - ti) * (t0**2 - (s - tx) ** 2), rel=1e-12)
    assert n11.term(0, -1) == pytest.approx((s + ti) * (t0**2 - (s + tx) ** 2), rel=1e-12)
    assert d11.term(0, 0) == pytest.approx(4 * tx * s**2 - 2 * ti * (s**2 - t0**2 + tx**2), rel=1e-12)
    assert d11.term(0, 1) == pytest.approx((s - ti) * (t0**2 - (s - tx) ** 2), rel=1e-12)
    assert d11.term(0, -1) == pytest.approx(-(s + ti) * (t0**2 - (s + tx) ** 2), rel=1e-12)
    n12, d12 = h.num12, h.den12
    assert n12.term(0, 0) == pytest.approx(2 * (s**2 - ti**2) * (s**2 - t0**2 + tx**2), rel=1e-12)
    assert n12.term(0, 1) == pytest.approx(-((s - ti) ** 2) * (t0**2 - (s - tx) ** 2), rel=1e-12)
    assert n12.term(0, -1) == pytest.approx(-((s + ti) ** 2) * (t0**2 - (s + tx) ** 2), rel=1e-12)
    assert d12.term(0, 0) == pytest.approx(2 * (s**2 - ti**2) * (s**2 + t0**2 - tx**2), rel=1e-12)


def test_symmetry_plus_minus(rng):
    # y_plus(sigma, rho) has the same coefficients as y_minus(-sigma, 1/rho)
    for _ in range(10):
        th = random_theta(rng)
        sigma = random_sigma(rng)
        if not admissible(th, sigma) or not admissible(th, -sigma):
            continue
        rho = complex(rng.uniform(0.5, 2.0), rng.uniform(-0.5, 0.5))
        h1 = build_power_generic(th, sigma, rho, n_max=6)
        h2 = build_power_generic(th, -sigma, 1.0 / rho, n_max=6)
        yp = h1.expansions["plus"]
        ym = h2.expansions["minus"]
        scale = max(yp.max_norm(), 1.0)
        for n in range(0, 7):
            for j in range(-6, 7):
                a = yp.term(n, j)
                b = ym.term(n, -j)
                assert abs(a - b) < 2e-9 * scale, (n, j)


def test_generic_excluded_parameters():
    with pytest.raises(ExcludedParameters):
        build_power_generic(TH, 2.0, 1.0)  # real |sigma| >= 1
    with pytest.raises(ExcludedParameters):
        build_power_generic(TH, 1 / 3 + 1 / 5, 1.0)  # sigma = theta0+thetax
    with pytest.raises(ExcludedParameters):
        build_power_generic(TH, 0.0, 1.0)


def test_eval_deep_omega_plus_leading(panel):
    h = build_power_generic(TH, SIGMA, 1.0, n_max=10)
    lnr = math.log(1e-6) / SIGMA.real
    x = CoverPoint(lnr, 0.0)
    xi = cmath.exp(SIGMA * x.log())
    got = h.eval(x).value
    model = 1 + c_leading(TH, SIGMA) * xi
    assert abs(got - model) < 1e-8 * abs(model)


def test_overlap_ratio_vs_series(panel):
    h = build_power_generic(TH, SIGMA, 1.0, n_max=12)
    for band in (-3.6, 3.6):  # |rho x^sigma| = e^-3.6 ~ 0.027 < eps0
        for lnr in (-8.0, -10.0):
            x = band_point(SIGMA, 1.0, band, lnr)
            tag = "plus" if band > 0 else "minus"
            assert in_domain(x, DomainSpec(DomainKind.OMEGA, SIGMA, 1.0))
            r = h.eval_via("ratio", x).value
            s = h.eval_via(tag, x).value
            assert abs(r - s) < 1e-9 * max(1.0, abs(r))


def test_out_of_domain():
    h = build_power_generic(TH, SIGMA, 1.0, n_max=6)
    with pytest.raises(OutOfDomain):
        h.eval(CoverPoint(1.0, 0.0))  # |x| = e > eps0


def test_special_leading_all_cases():
    t0, tx, ti = TH.as_tuple()
    cases = {
        SpecialKind.SUM: (t0 + tx, 1.0, lambda s0: -(s0**2) / (t0 * tx),
                          lambda s0: -4 * s0**2 / (s0**2 - ti**2)),
        SpecialKind.DIFF: (t0 - tx, -(t0 - tx - ti) / (t0 - tx + ti),
                           lambda s0: -s0 / t0, lambda s0: -4 * t0 * s0 / (s0**2 - ti**2)),
        SpecialKind.RDIFF: (tx - t0, -(tx - t0 + ti) / (tx - t0 - ti),
                            lambda s0: -s0 / tx, lambda s0: -4 * tx * s0 / (s0**2 - ti**2)),
    }
    for kind, (s0, pref, c1, cm) in cases.items():
        h = build_power_special(TH, kind, 0.7, n_max=8)
        z = h.expansions["zero"]
        m = h.expansions["minus"]
        assert abs(z.term(0, 0) - pref) < 1e-10
        assert abs(z.term(0, 1) - pref * c1(s0)) < 1e-10
        assert abs(m.term(0, 0) - 1.0) < 1e-10
        assert abs(m.term(0, -1) - cm(s0)) < 1e-10


def test_special_rho_zero_taylor_values():
    t0, tx, ti = TH.as_tuple()
    hs = build_power_special(TH, SpecialKind.SUM, 0.0, n_max=8)
    assert abs(hs.expansions["zero"].term(1, 0) - 1 / (1 - t0 - tx)) < 1e-10
    hd = build_power_special(TH, SpecialKind.DIFF, 0.0, n_max=8)
    assert abs(hd.expansions["zero"].term(0, 0) + (t0 - tx - ti) / (t0 - tx + ti)) < 1e-10


def test_special_excluded():
    with pytest.raises(ExcludedParameters):
        build_power_special(Theta.of(0.0, 1 / 5, 1 / 7), SpecialKind.SUM, 1.0)
    with pytest.raises(ExcludedParameters):
        # sigma0 = theta0+thetax = 1 integer
        build_power_special(Theta.of(0.5, 0.5, 1 / 7), SpecialKind.SUM, 1.0)
    with pytest.raises(ExcludedParameters):
        # sigma0^2 = thetainf^2
        build_power_special(Theta.of(0.3, 0.2, 0.5), SpecialKind.SUM, 1.0)


ILOG_LEADS = [
    (IlogVariant.MAIN, Theta.of(1 / 3, 1 / 5, 1 / 7), -2,
     lambda t0, tx, ti: 4 / (ti * (t0 - tx))),
    (IlogVariant.EQ_PLUS, Theta.of(1 / 4, 1 / 4, 1 / 7), -1, lambda t0, tx, ti: -2 / ti),
    (IlogVariant.EQ_MINUS, Theta.of(1 / 4, 1 / 4, 1 / 7), -1, lambda t0, tx, ti: 2 / ti),
    (IlogVariant.OPP, Theta.of(1 / 4, -1 / 4, 1 / 7), -2, lambda t0, tx, ti: 2 / (t0 * ti)),
    (IlogVariant.L1, Theta.of(1 / 3, 1 / 5, 0), -1, lambda t0, tx, ti: 2 / (t0 - tx)),
    (IlogVariant.L2, Theta.of(1 / 3, 1 / 5, 0), -1, lambda t0, tx, ti: -2 / (t0 - tx)),
    (IlogVariant.OPP0, Theta.of(1 / 4, -1 / 4, 0), -1, lambda t0, tx, ti: 1 / t0),
]


@pytest.mark.parametrize("variant,th,mlead,want", ILOG_LEADS)
def test_ilog_leading_coefficients(variant, th, mlead, want):
    h = build_ilog(th, variant, 1.0, n_max=8)
    star = h.expansions["star"]
    t0, tx, ti = th.as_tuple()
    w = want(t0, tx, ti)
    assert abs(star.term(0, 0) - 1.0) < 1e-10
    assert abs(star.term(0, mlead) - w) < 1e-10 * max(1, abs(w))
    if mlead == -2:
        assert abs(star.term(0, -1)) < 1e-10


def test_ilog_eq_plus_pure_pole_truncates():
    # for equal parameters the '+' expansion has no deeper inverse-log terms
    h = build_ilog(Theta.of(1 / 4, 1 / 4, 1 / 7), IlogVariant.EQ_PLUS, 1.0, n_max=8)
    star = h.expansions["star"]
    for j in range(2, 8):
        assert abs(star.term(0, -j)) < 1e-11


def test_ilog_residual_on_ray():
    h = build_ilog(TH, IlogVariant.MAIN, 1.0, n_max=12)
    x = CoverPoint(math.log(1e-3), 0.0)  # arg(rho x) = 0, |rho x| = 1e-3

    def yfun(p):
        return h.eval(p).value

    res = pv_residual(yfun, TH, x)
    scale = residual_scale(yfun, x)
    assert abs(res) < 1e-8 * scale


def test_taylor_coefficients():
    h = build_taylor(0.5, 1.0, "+", n_max=6)
    assert h.taylor_coeffs[0] == pytest.approx((1 + 0.5) / 1)
    assert h.taylor_coeffs[1] == pytest.approx((1 + 0.5) * (1 - 2 * 0.5) / 1)
    hm = build_taylor(0.5, 1.0, "-", n_max=6)
    assert hm.taylor_coeffs[0] == pytest.approx(1.0)
    assert hm.taylor_coeffs[1] == pytest.approx(1.0)
    assert hm.taylor_coeffs[2] == pytest.approx((1 - 0.5 - 2) / 2)


def test_taylor_zero_theta_families_coincide():
    hp = build_taylor(0.0, 0.8, "+", n_max=8)
    hm = build_taylor(0.0, 0.8, "-", n_max=8)
    assert np.allclose(hp.taylor_coeffs, hm.taylor_coeffs, atol=0, rtol=0)


def test_taylor_zero_a_raises():
    with pytest.raises(ZeroA):
        build_taylor(0.5, 0.0, "+")


def test_taylor_residual_order():
    # residual of the degree-N truncation behaves like x^(N+1): it shrinks
    # by ~2^(N-1) when |x| halves (two powers cancel against 1/x^2 scale)
    h = build_taylor(0.5, 0.7, "-", n_max=10)

    def yfun(p):
        return h.eval(p).value

    th = h.theta
    r1 = abs(pv_residual(yfun, th, CoverPoint(math.log(0.02), 0.3)))
    r2 = abs(pv_residual(yfun, th, CoverPoint(math.log(0.01), 0.3)))
    assert r2 < r1 / 100


def test_pv_residual_handles(panel, rng):
    # every family produces small residuals at interior sample points
    handles = [
        (TH, build_power_generic(TH, SIGMA, 1.0, n_max=12)),
        (TH, build_power_special(TH, SpecialKind.SUM, 0.7, n_max=12)),
        (Theta.of(0.25, 0.25, 0.0), build_tanh(0.25, SIGMA, 1.0, n_max=12)),
    ]
    pts = [band_point(SIGMA, 1.0, b, lnr) for b in (-0.5, 0.7) for lnr in (-7.0, -9.0)]
    for th, h in handles:
        for x in pts:
            try:
                tag = h.representation_for(x)
                if tag is None:
                    continue
                yfun = lambda p: h.eval_via(tag, p).value
                v = h.eval_via(tag, x)
                if v.pole or abs(v.value) < 1e-6 or abs(v.value - 1) < 1e-6:
                    continue
                res = pv_residual(yfun, th, x)
                scale = residual_scale(yfun, x)
            except (OutOfDomain, SingularValue):
                continue
            assert abs(res) < 1e-7 * scale, (h.family, x)


def test_residual_fd_order():
    # in the step-dominated regime the difference between steps shrinks ~h^4
    h = build_power_generic(TH, SIGMA, 1.0, n_max=12)
    x = band_point(SIGMA, 1.0, 0.3, -8.0)
    yfun = lambda p: h.eval_via("ratio", p).value
    r = [pv_residual(yfun, TH, x, h_rel=hr) for hr in (0.08, 0.04, 0.02)]
    d1 = abs(r[0] - r[1])
    d2 = abs(r[1] - r[2])
    assert d2 < d1 / 8  # comfortably beyond 2^3, consistent with 4th order


def test_residual_singular_value():
    with pytest.raises(SingularValue):
        pv_residual(lambda p: 1.0 + 0j, TH, CoverPoint(-3.0, 0.0))


def test_tanh_inner_leading_and_rho():
    h = build_tanh(0.25, 0.2 + 0.1j, 1.0, n_max=6)
    # rho_tilde/rho = (1/2 - sigma)/(1/2 + sigma)
    s = 0.2 + 0.1j
    assert h.rho_unit == pytest.approx((0.5 - s) / (0.5 + s))
    # inner argument at order 0 is exactly log(rho_t x^sigma)/2: series empty at n=0
    assert np.abs(h.inner.data[0]).max() == 0.0


def test_tanh_matches_generic(panel):
    hg = build_power_generic(Theta.of(0.25, 0.25, 0.0), SIGMA, 1.0, n_max=12)
    ht = build_tanh(0.25, SIGMA, 1.0, n_max=12)
    count = 0
    for band in (-0.9, -0.3, 0.2, 0.8, 1.3):
        for lnr in (-5.0, -7.0, -9.0, -11.0):
            x = band_point(SIGMA, 1.0, band, lnr)
            vg = hg.eval_via("ratio", x)
            vt = ht.eval_tanh(x)
            if vg.pole or vt.pole:
                continue
            assert abs(vg.value - vt.value) < 1e-8 * max(1, abs(vg.value))
            count += 1
    assert count >= 20


def test_tanh_odd_matches_generic(panel):
    hg = build_power_generic(Theta.of(0.25, 0.25, 0.0), SIGMA, 1.0, n_max=12)
    ho = build_tanh(0.25, SIGMA, 1.0, n_max=12, odd=True)
    for band in (-0.5, 0.4):
        for lnr in (-6.0, -9.0):
            x = band_point(SIGMA, 1.0, band, lnr, shift=-1.0)
            vo = ho.eval(x)
            vg = hg.eval_via("ratio", x)
            if vo.pole or vg.pole:
                continue
            assert abs(vo.value - vg.value) < 1e-8


def test_tanh_excluded():
    with pytest.raises(ExcludedParameters):
        build_tanh(0.25, 0.5, 1.0)  # sigma = 2 theta0
    with pytest.raises(ExcludedParameters):
        build_tanh(0.75, -0.5, 1.0, odd=True)  # (sigma+1)^2 = (2 theta0-1)^2


def test_residual_drops_with_truncation(panel):
    # doubling the kept orders cuts the residual by orders of magnitude
    x = band_point(SIGMA, 1.0, 0.4, -4.4)

    def max_res(n_max):
        h = build_power_generic(TH, SIGMA, 1.0, n_max=n_max)
        yfun = lambda p: h.eval_via("ratio", p).value
        return abs(pv_residual(yfun, TH, x)) / residual_scale(yfun, x)

    r8 = max_res(6)
    r12 = max_res(12)
    assert r12 < r8 / 1e3
