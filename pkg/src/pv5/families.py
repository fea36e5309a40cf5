"""Solution families of the fifth Painleve equation near x = 0.

Each family produces a SolutionHandle bundling per-domain representations:
a meromorphic ratio of four convergent series (valid on the wide annular
domain, across poles), reorganized one-sided expansions (valid deep in the
power/log regions), a plain Taylor polynomial, or a closed hyperbolic form.
Evaluation classifies near-pole points instead of failing, and an
equation-residual meter with independent finite-difference derivatives
checks any representation against the ODE itself.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .cover import CoverPoint, DomainKind, DomainSpec, in_domain
from .errors import ExcludedParameters, OutOfDomain, Pv5Error, SingularValue, ZeroA
from .formal import Series, geometric_inverse
from .schlesinger import (
    APair,
    DEFAULT_TRUNC,
    RingKind,
    build_apair,
    normalize_ilog,
    rho_shift_factor,
)
from .seeds import LamKind, TaylorCase, seed_generic, seed_log, seed_taylor
from .theta import Theta

POLE_EPS = 1e-8
DEFAULT_EPS0 = 0.05


class Family(Enum):
    POWER_GENERIC = "power-generic"
    POWER_SPECIAL = "power-special"
    INVERSE_LOG = "inverse-log"
    TAYLOR = "taylor"
    TANH = "tanh"
    TANH_ODD = "tanh-odd"


class SpecialKind(Enum):
    SUM = "sum"      # sigma0 = theta0 + thetax
    DIFF = "diff"    # sigma0 = theta0 - thetax
    RDIFF = "rdiff"  # sigma0 = thetax - theta0


class IlogVariant(Enum):
    MAIN = "main"    # thetainf != 0, theta0^2 != thetax^2
    EQ_PLUS = "eq+"  # theta0 = thetax != 0, upper sign
    EQ_MINUS = "eq-"
    OPP = "opp"      # theta0 = -thetax != 0, thetainf != 0
    L1 = "l1"        # thetainf = 0, theta0^2 != thetax^2, nilpotent upper
    L2 = "l2"        # thetainf = 0, theta0^2 != thetax^2, nilpotent lower
    OPP0 = "opp0"    # thetainf = 0, theta0 = -thetax != 0


@dataclass(frozen=True)
class MeroValue:
    """Finite value, or near-pole classification with the denominator size."""

    value: complex | None
    pole: bool = False
    denom_magnitude: float = 0.0

    def finite(self) -> complex:
        if self.pole:
            raise SingularValue("value classified as pole-like")
        return self.value


def _is_excluded_sigma(sigma: complex) -> bool:
    """sigma in the excluded set: 0, or real with |sigma| >= 1."""
    if sigma == 0:
        return True
    return sigma.imag == 0.0 and abs(sigma.real) >= 1.0


def _is_nonpositive_or_integer(sigma: complex) -> bool:
    if sigma.imag != 0.0:
        return False
    r = sigma.real
    return r <= -1.0 or abs(r - round(r)) < 1e-12


def c_leading(theta: Theta, sigma: complex) -> complex:
    """Leading coefficient of the growing one-sided expansion."""
    t0, tx, ti = theta.as_tuple()
    den = (sigma + ti) * (t0**2 - (sigma + tx) ** 2)
    if den == 0:
        raise ExcludedParameters("leading coefficient undefined")
    return 4 * sigma**2 * (t0 + tx - sigma) / den


def rho_star_factor(theta: Theta, sigma: complex) -> complex:
    """Internal-to-user rho conversion for the generic power family."""
    t0, tx, ti = theta.as_tuple()
    return (t0 - tx + sigma) * (t0 + tx - sigma) / (2 * sigma * (sigma + ti))


@dataclass
class SolutionHandle:
    family: Family
    theta: Theta
    sigma: complex
    rho: complex
    n_max: int
    eps0: float = DEFAULT_EPS0
    # ratio representation: scalar series in user-rho units
    num11: Series | None = None
    den11: Series | None = None
    num12: Series | None = None
    den12: Series | None = None
    # one-sided expansions keyed by tag
    expansions: dict = field(default_factory=dict)
    # taylor polynomial coefficients in x
    taylor_coeffs: np.ndarray | None = None
    # tanh inner series and unit
    inner: Series | None = None
    rho_unit: complex = 1.0  # rho entering the series unit (rho, rho_tilde, ...)
    log_kind: bool = False
    pair: APair | None = None
    base: "SolutionHandle | None" = None  # composed families wrap another handle
    special: SpecialKind | None = None
    variant: IlogVariant | None = None
    reps: list = field(default_factory=list)

    # -- unit bookkeeping ---------------------------------------------------

    def _log_unit(self, x: CoverPoint):
        lx = x.log()
        if self.log_kind:
            return lx, cmath.log(self.rho_unit) + lx, None
        return lx, None, cmath.log(self.rho_unit) + self.sigma * lx

    def _eval_series(self, s: Series, x: CoverPoint):
        log_u, v, log_v = self._log_unit(x)
        return s.eval(log_u, v=v, log_v=log_v)

    # -- representations ------------------------------------------------------

    def eval_ratio(self, x: CoverPoint) -> MeroValue:
        n1, s_n1 = self._eval_series(self.num11, x)
        n2, s_n2 = self._eval_series(self.num12, x)
        d1, s_d1 = self._eval_series(self.den11, x)
        d2, s_d2 = self._eval_series(self.den12, x)
        num = n1 * n2
        den = d1 * d2
        scale = max(s_d1 * s_d2, 1e-300)
        if abs(den) < POLE_EPS * scale:
            return MeroValue(None, pole=True, denom_magnitude=abs(den) / scale)
        return MeroValue(num / den)

    def eval_expansion(self, tag: str, x: CoverPoint) -> MeroValue:
        val, _ = self._eval_series(self.expansions[tag], x)
        return MeroValue(val)

    def eval_taylor(self, x: CoverPoint) -> MeroValue:
        z = x.to_complex()
        acc = 0.0 + 0.0j
        for c in self.taylor_coeffs[::-1]:
            acc = acc * z + c
        return MeroValue(acc)

    def eval_tanh(self, x: CoverPoint) -> MeroValue:
        u = self._tanh_u(x)
        t = cmath.tanh(0.5 * u)
        val = t * t
        if abs(val) > 1.0 / POLE_EPS:
            return MeroValue(None, pole=True, denom_magnitude=1.0 / abs(val))
        return MeroValue(val)

    def _tanh_u(self, x: CoverPoint) -> complex:
        s_val, _ = self._eval_series(self.inner, x)
        return cmath.log(self.rho_unit) + self.sigma * x.log() + 2.0 * s_val

    def eval_backlund(self, x: CoverPoint) -> MeroValue:
        yv, dy = self.base.eval_with_derivative(x)
        t0, tx, ti = self.theta.as_tuple()
        z = x.to_complex()
        den = (
            z * dy
            - (t0 + tx - ti) * yv * yv / 2
            + (t0 + tx - 1 + z) * yv
            + 1
            - (t0 + tx + ti) / 2
        )
        scale = max(abs(z * dy), abs(yv) ** 2, abs(yv), 1.0)
        if abs(den) < POLE_EPS * scale:
            return MeroValue(None, pole=True, denom_magnitude=abs(den) / scale)
        return MeroValue(1.0 - 2.0 * z * yv / den)

    # -- dispatch ----------------------------------------------------------------

    def domain(self, kind: DomainKind, rho=None, sigma=None, nu: int = 0) -> DomainSpec:
        return DomainSpec(
            kind,
            sigma=self.sigma if sigma is None else sigma,
            rho=self.rho if rho is None else rho,
            eps0=self.eps0,
            nu=nu,
        )

    def representation_for(self, x: CoverPoint) -> str | None:
        fam = self.family
        if fam in (Family.POWER_GENERIC,):
            deep = self.eps0 * self.eps0
            if in_domain(x, DomainSpec(DomainKind.OMEGA_PLUS, self.sigma, self.rho, deep)):
                return "plus"
            if in_domain(x, DomainSpec(DomainKind.OMEGA_MINUS, self.sigma, self.rho, deep)):
                return "minus"
            if in_domain(x, self.domain(DomainKind.OMEGA)):
                return "ratio"
            if in_domain(x, self.domain(DomainKind.OMEGA_PLUS)):
                return "plus"
            if in_domain(x, self.domain(DomainKind.OMEGA_MINUS)):
                return "minus"
            return None
        if fam is Family.POWER_SPECIAL:
            if self._in_special_ratio_domain(x):
                return "ratio"
            if in_domain(x, self.domain(DomainKind.OMEGA_MINUS)):
                return "minus"
            if in_domain(x, self.domain(DomainKind.OMEGA_0)):
                return "zero"
            return None
        if fam is Family.INVERSE_LOG:
            if in_domain(x, self.domain(DomainKind.OMEGA_STAR)):
                return "ratio"
            return None
        if fam is Family.TAYLOR:
            if x.lnr < math.log(self.eps0):
                return "taylor"
            return None
        if fam is Family.TANH:
            if in_domain(x, self.domain(DomainKind.OMEGA, rho=self.rho_unit)):
                return "tanh"
            return None
        if fam is Family.TANH_ODD:
            if self.base.representation_for(x) is not None:
                return "backlund"
            return None
        raise Pv5Error(f"unhandled family {fam}")

    def _in_special_ratio_domain(self, x: CoverPoint) -> bool:
        # |x| < eps0 and |x * rho x^sigma| < eps0
        l1 = -math.log(self.eps0)
        if x.lnr >= -l1:
            return False
        if self.rho == 0:
            return True
        lxi = self.sigma.real * x.lnr - self.sigma.imag * x.arg + math.log(abs(self.rho))
        return x.lnr + lxi < -l1

    def eval(self, x: CoverPoint) -> MeroValue:
        tag = self.representation_for(x)
        if tag is None:
            raise OutOfDomain(f"no representation covers lnr={x.lnr}, arg={x.arg}")
        return self.eval_via(tag, x)

    def eval_via(self, tag: str, x: CoverPoint) -> MeroValue:
        if tag == "ratio":
            return self.eval_ratio(x)
        if tag == "taylor":
            return self.eval_taylor(x)
        if tag == "tanh":
            return self.eval_tanh(x)
        if tag == "backlund":
            return self.eval_backlund(x)
        return self.eval_expansion(tag, x)

    def eval_with_derivative(self, x: CoverPoint) -> tuple[complex, complex]:
        """(y, dy/dx) from the active representation, by exact series calculus."""
        tag = self.representation_for(x)
        if tag is None:
            raise OutOfDomain("no representation at the requested point")
        z = x.to_complex()
        if tag == "ratio":
            n1, _ = self._eval_series(self.num11, x)
            n2, _ = self._eval_series(self.num12, x)
            d1, _ = self._eval_series(self.den11, x)
            d2, _ = self._eval_series(self.den12, x)
            en1, _ = self._eval_series(self._euler(self.num11), x)
            en2, _ = self._eval_series(self._euler(self.num12), x)
            ed1, _ = self._eval_series(self._euler(self.den11), x)
            ed2, _ = self._eval_series(self._euler(self.den12), x)
            num = n1 * n2
            den = d1 * d2
            enum_ = en1 * n2 + n1 * en2
            eden = ed1 * d2 + d1 * ed2
            y = num / den
            dy = (enum_ * den - num * eden) / (den * den) / z
            return y, dy
        if tag == "taylor":
            y = self.eval_taylor(x).value
            dcoeffs = self.taylor_coeffs[1:] * np.arange(1, len(self.taylor_coeffs))
            dy = 0.0 + 0.0j
            for c in dcoeffs[::-1]:
                dy = dy * z + c
            return y, dy
        if tag == "tanh":
            u = self._tanh_u(x)
            es, _ = self._eval_series(self._euler(self.inner), x)
            du = (self.sigma + 2.0 * es) / z
            t = cmath.tanh(0.5 * u)
            return t * t, t * (1 - t * t) * du
        if tag == "backlund":
            y = self.eval_backlund(x).finite()
            h = 1e-6 * abs(z)
            vals = []
            for k in (-2, -1, 1, 2):
                xk = x.shifted(k * h * z / abs(z))
                vals.append(self.eval_backlund(xk).finite())
            step = h * z / abs(z)
            dy = (vals[0] - 8 * vals[1] + 8 * vals[2] - vals[3]) / (12 * step)
            return y, dy
        # one-sided expansions
        s = self.expansions[tag]
        yv, _ = self._eval_series(s, x)
        ev, _ = self._eval_series(self._euler(s), x)
        return yv, ev / z

    def _euler(self, s: Series) -> Series:
        return s.euler_log() if self.log_kind else s.euler_power(self.sigma)


# -- helpers to pull scalar series out of a residue pair -----------------------


def _scaled_entry_series(pair: APair, wide: int):
    """The four ratio factors, as scalar series on a wide index window."""
    t0, tx, ti = pair.seed.theta.as_tuple()
    s = pair.sigma if pair.kind is RingKind.POWER else 1.0
    scale11 = 8.0 * s * s if pair.kind is RingKind.POWER else 1.0
    scale12 = scale11 * ((s + ti) if pair.kind is RingKind.POWER else 1.0)
    n11 = pair.A0.entry(0, 0)
    n11.add_term(0, 0, t0 / 2)
    d11 = pair.Ax.entry(0, 0)
    d11.add_term(0, 0, tx / 2)
    n12 = pair.Ax.entry(0, 1)
    d12 = pair.A0.entry(0, 1)
    out = []
    for ser, sc in ((n11, scale11), (d11, scale11), (n12, scale12), (d12, scale12)):
        w = Series(ser.n_max, -wide, wide, False)
        lo = max(ser.m_lo, -wide)
        hi = min(ser.m_hi, wide)
        w.data[:, lo + wide : hi + wide + 1] = ser.data[:, lo - ser.m_lo : hi - ser.m_lo + 1] * sc
        out.append(w)
    return out  # num11, den11, num12, den12


def _rescale_unit(s: Series, f: complex) -> Series:
    """Rewrite sum c x^n v^m as series in v' = v/f: multiply c by f^m."""
    out = s.copy()
    m = np.arange(s.m_lo, s.m_hi + 1)
    out.data *= np.power(complex(f), m)[None, :]
    return out


def _product_expansion(factors, lead_keys, n_max) -> Series:
    num11, den11, num12, den12 = factors
    inv_d11 = geometric_inverse(den11.drop_small(1e-13 * max(den11.max_norm(), 1.0)), lead_keys[1])
    inv_d12 = geometric_inverse(den12.drop_small(1e-13 * max(den12.max_norm(), 1.0)), lead_keys[3])
    y = ((num11 @ inv_d11) @ num12) @ inv_d12
    return y


# -- builders -------------------------------------------------------------------


def build_power_generic(
    theta: Theta, sigma: complex, rho: complex, n_max: int = DEFAULT_TRUNC,
    eps0: float = DEFAULT_EPS0,
) -> SolutionHandle:
    sigma = complex(sigma)
    rho = complex(rho)
    t0, tx, ti = theta.as_tuple()
    if _is_excluded_sigma(sigma):
        raise ExcludedParameters(
            "sigma lies in the excluded real set {0} u {|sigma| >= 1}"
        )
    if (sigma**2 - (t0 + tx) ** 2) * (sigma**2 - (t0 - tx) ** 2) == 0 or (
        sigma**2 - ti**2
    ) == 0:
        raise ExcludedParameters("sigma^2 coincides with (theta0 +- thetax)^2 or thetainf^2")
    if rho == 0:
        raise ExcludedParameters("rho must be nonzero for the two-parameter family")
    f = rho_star_factor(theta, sigma)
    pair = build_apair(seed_generic(theta, sigma), rho=f * rho, n_max=n_max)
    wide = 2 * n_max + 8
    factors = [
        _rescale_unit(s, f) for s in _scaled_entry_series(pair, wide)
    ]
    handle = SolutionHandle(
        Family.POWER_GENERIC, theta, sigma, rho, n_max, eps0,
        num11=factors[0], den11=factors[1], num12=factors[2], den12=factors[3],
        rho_unit=rho, pair=pair,
    )
    handle.expansions["plus"] = _product_expansion(factors, [(0, -1)] * 4, n_max)
    handle.expansions["minus"] = _product_expansion(factors, [(0, 1)] * 4, n_max)
    handle.reps = [
        (handle.domain(DomainKind.OMEGA), "ratio"),
        (handle.domain(DomainKind.OMEGA_PLUS), "plus"),
        (handle.domain(DomainKind.OMEGA_MINUS), "minus"),
    ]
    return handle


def build_power_special(
    theta: Theta, which: SpecialKind, rho: complex, n_max: int = DEFAULT_TRUNC,
    eps0: float = DEFAULT_EPS0,
) -> SolutionHandle:
    t0, tx, ti = theta.as_tuple()
    if t0 * tx == 0:
        raise ExcludedParameters("needs theta0 * thetax != 0")
    sigma0 = {
        SpecialKind.SUM: t0 + tx,
        SpecialKind.DIFF: t0 - tx,
        SpecialKind.RDIFF: tx - t0,
    }[which]
    if _is_nonpositive_or_integer(sigma0):
        raise ExcludedParameters("sigma0 outside the admissible set")
    if sigma0**2 == ti**2:
        raise ExcludedParameters("sigma0^2 = thetainf^2 is excluded")
    rho = complex(rho)
    pair = build_apair(seed_generic(theta, sigma0), rho=rho if rho != 0 else 1.0, n_max=n_max)
    wide = 2 * n_max + 8
    factors = _scaled_entry_series(pair, wide)
    # this one-parameter restriction carries only m >= 0: prune rounding dust
    scale = max(max(f.max_norm() for f in factors), 1.0)
    for fser in factors:
        neg = fser.data[:, : -fser.m_lo]
        if np.abs(neg).max(initial=0.0) > 1e-12 * scale:
            raise Pv5Error("negative powers did not vanish at the special exponent")
        neg[...] = 0.0
    handle = SolutionHandle(
        Family.POWER_SPECIAL, theta, sigma0, rho, n_max, eps0,
        num11=factors[0], den11=factors[1], num12=factors[2], den12=factors[3],
        rho_unit=rho if rho != 0 else 1.0, pair=pair, special=which,
    )
    handle.expansions["zero"] = _product_expansion(factors, [(0, 0)] * 4, n_max)
    handle.expansions["minus"] = _product_expansion(factors, [(0, 1)] * 4, n_max)
    handle.reps = [
        (handle.domain(DomainKind.OMEGA_0), "zero"),
        (handle.domain(DomainKind.OMEGA_MINUS), "minus"),
    ]
    return handle


_ILOG_SETUP = {
    # variant: (sign, lam_kind picker, normalized?)
    IlogVariant.MAIN: (-1, LamKind.JORDAN, True),
    IlogVariant.EQ_PLUS: (+1, LamKind.JORDAN, False),
    IlogVariant.EQ_MINUS: (-1, LamKind.JORDAN, False),
    IlogVariant.OPP: (+1, LamKind.JORDAN, False),
    IlogVariant.L1: (-1, LamKind.DELTA, True),
    IlogVariant.L2: (-1, LamKind.DELTA_MINUS, True),
    IlogVariant.OPP0: (+1, LamKind.DELTA, False),
}


def build_ilog(
    theta: Theta, variant: IlogVariant, rho: complex, n_max: int = DEFAULT_TRUNC,
    eps0: float = DEFAULT_EPS0,
) -> SolutionHandle:
    t0, tx, ti = theta.as_tuple()
    rho = complex(rho)
    if rho == 0:
        raise ExcludedParameters("rho must be nonzero")
    sign, lam, normalized = _ILOG_SETUP[variant]
    if variant is IlogVariant.MAIN and (ti == 0 or t0**2 == tx**2):
        raise ExcludedParameters("needs thetainf != 0 and theta0^2 != thetax^2")
    if variant in (IlogVariant.EQ_PLUS, IlogVariant.EQ_MINUS) and (
        ti == 0 or t0 != tx or t0 == 0
    ):
        raise ExcludedParameters("needs theta0 = thetax != 0 and thetainf != 0")
    if variant is IlogVariant.OPP and (ti == 0 or t0 != -tx or t0 == 0):
        raise ExcludedParameters("needs theta0 = -thetax != 0 and thetainf != 0")
    if variant in (IlogVariant.L1, IlogVariant.L2) and (ti != 0 or t0**2 == tx**2):
        raise ExcludedParameters("needs thetainf = 0 and theta0^2 != thetax^2")
    if variant is IlogVariant.OPP0 and (ti != 0 or t0 != -tx or t0 == 0):
        raise ExcludedParameters("needs thetainf = 0 and theta0 = -thetax != 0")
    if ti != 0:
        lam = LamKind.JORDAN
    seed = seed_log(theta, sign=sign, lam_kind=lam)
    if normalized:
        rho_int = rho * rho_shift_factor(theta, sign)
        pair = normalize_ilog(build_apair(seed, rho_int, n_max), rho)
    else:
        pair = build_apair(seed, rho, n_max)
    wide = 2 * n_max + 10
    factors = _scaled_entry_series(pair, wide)
    handle = SolutionHandle(
        Family.INVERSE_LOG, theta, 0.0, rho, n_max, eps0,
        num11=factors[0], den11=factors[1], num12=factors[2], den12=factors[3],
        rho_unit=rho, log_kind=True, pair=pair, variant=variant,
    )
    leads = [_log_leading(f) for f in factors]
    handle.expansions["star"] = _product_expansion(factors, leads, n_max)
    handle.reps = [(handle.domain(DomainKind.OMEGA_STAR), "ratio")]
    return handle


def _log_leading(s: Series) -> tuple[int, int]:
    """Highest log power in the order-0 part (the growing direction)."""
    scale = max(s.max_norm(), 1.0)
    row = s.data[0]
    for c in range(row.shape[0] - 1, -1, -1):
        if abs(row[c]) > 1e-12 * scale:
            return (0, c + s.m_lo)
    raise Pv5Error("empty leading row")


def build_taylor(theta0: complex, a: complex, pm: str, n_max: int = DEFAULT_TRUNC,
                 eps0: float = DEFAULT_EPS0) -> SolutionHandle:
    theta0 = complex(theta0)
    a = complex(a)
    if pm == "+":
        if a == 0:
            raise ZeroA("the '+' family needs a != 0")
        case = TaylorCase.ZERO if theta0 == 0 else TaylorCase.PLUS
    elif pm == "-":
        case = TaylorCase.ZERO if theta0 == 0 else TaylorCase.MINUS
    else:
        raise ValueError("pm must be '+' or '-'")
    seed = seed_taylor(theta0, a, case)
    pair = build_apair(seed, rho=1.0, n_max=n_max)
    n11, d11, n12, d12 = _scaled_entry_series(pair, 1)
    inv_d12 = geometric_inverse(d12, (0, 0))
    y12 = (n12 @ inv_d12).scale(-1.0)  # -Y12
    if pm == "-" and theta0 != 0:
        y = y12  # Y11 = -1 identically when thetax = -theta0
    else:
        inv_d11 = geometric_inverse(d11, (0, 0))
        y11 = (n11 @ inv_d11).scale(-1.0)
        y = y11 @ y12
    coeffs = y.data[:, -y.m_lo].copy()
    coeffs *= 0.5 ** np.arange(n_max + 1)  # series variable was x/2
    handle = SolutionHandle(
        Family.TAYLOR, Theta(theta0, theta0 if pm == "+" else -theta0, 0.0),
        0.0, a, n_max, eps0, taylor_coeffs=coeffs, pair=pair,
    )
    handle.reps = [(DomainSpec(DomainKind.OMEGA_0, sigma=0.0, rho=0.0, eps0=eps0), "taylor")]
    return handle


def build_tanh(theta0: complex, sigma: complex, rho: complex,
               n_max: int = DEFAULT_TRUNC, odd: bool = False,
               eps0: float = DEFAULT_EPS0) -> SolutionHandle:
    """Closed hyperbolic representations for theta0 = thetax, thetainf = 0."""
    theta0 = complex(theta0)
    sigma = complex(sigma)
    rho = complex(rho)
    theta = Theta(theta0, theta0, 0.0)
    if _is_excluded_sigma(sigma):
        raise ExcludedParameters("sigma in the excluded real set")
    if odd:
        if (sigma + 1) ** 2 == (2 * theta0 - 1) ** 2:
            raise ExcludedParameters("(sigma+1)^2 = (2 theta0 - 1)^2 is excluded")
        from .backlund import pi_theta

        rho_hat = (sigma + 2) * (2 * theta0 - sigma) / (8 * sigma * (sigma + 1) ** 2) * rho
        base = build_power_generic(pi_theta(theta), sigma + 1.0, rho_hat, n_max, eps0)
        handle = SolutionHandle(
            Family.TANH_ODD, theta, sigma, rho, n_max, eps0, base=base,
        )
        handle.reps = list(base.reps)
        return handle
    if sigma**2 == 4 * theta0**2:
        raise ExcludedParameters("sigma^2 = 4 theta0^2 is excluded")
    rho_t = (2 * theta0 - sigma) / (2 * theta0 + sigma) * rho
    inner = _tanh_inner_series(theta0, sigma, n_max)
    handle = SolutionHandle(
        Family.TANH, theta, sigma, rho, n_max, eps0,
        inner=inner, rho_unit=rho_t,
    )
    handle.reps = [(handle.domain(DomainKind.OMEGA, rho=rho_t), "tanh")]
    return handle


def _tanh_inner_series(theta0: complex, sigma: complex, n_max: int) -> Series:
    """Inner correction S with y = tanh^2(log(rho_t x^sigma)/2 + S).

    Determined order by order from the hyperbolic form of the equation,
    2 (n + sigma j)^2 s_{nj} = [x^n w^j] of
    (1 - 2 theta0)/4 * x (w E+ - E-/w) + x^2/16 (w^2 E+^2 - E-^2/w^2),
    where E+- = exp(+-2 S).
    """
    wide = n_max + 2
    s = Series(n_max, -wide, wide, False)
    c1 = (1.0 - 2.0 * theta0) / 4.0
    for n in range(1, n_max + 1):
        ep = _exp_series(s.scale(2.0), n - 1)
        em = _exp_series(s.scale(-2.0), n - 1)
        rhs = (ep.mshift(1) - em.mshift(-1)).scale(c1).nshift(1)
        if n >= 2:
            ep2 = ep @ ep
            em2 = em @ em
            rhs = rhs + (ep2.mshift(2) - em2.mshift(-2)).scale(1.0 / 16.0).nshift(2)
        for j in range(-n, n + 1):
            div = 2.0 * (n + sigma * j) ** 2
            s.put(n, j, rhs.term(n, j) / div)
    return s


def _exp_series(s: Series, order: int) -> Series:
    """exp of a series with no order-0 part, truncated at x-order `order`."""
    out = Series.constant(1.0, s.n_max, s.m_lo, s.m_hi)
    term = Series.constant(1.0, s.n_max, s.m_lo, s.m_hi)
    for k in range(1, order + 1):
        term = (term @ s).scale(1.0 / k)
        if term.max_norm() == 0.0:
            break
        out = out + term
    # zero anything beyond the requested order: callers slice by x-order
    if order + 1 <= s.n_max:
        out.data[order + 1 :] = 0.0
    return out


# -- the equation residual meter ----------------------------------------------


def pv_residual(yfun, theta: Theta, x: CoverPoint, h_rel: float = 4e-3) -> complex:
    """LHS - RHS of the equation at x, derivatives by 5-point differences.

    yfun maps CoverPoint -> complex.  The step is radial and scales with
    |x|, keeping the check independent of how y was constructed.
    """
    z = x.to_complex()
    h = h_rel * z  # radial complex step
    ys = []
    for k in (-2, -1, 0, 1, 2):
        ys.append(yfun(x.shifted(k * h)))
    ym2, ym1, y0, yp1, yp2 = ys
    if abs(y0) < 1e-12 or abs(y0 - 1.0) < 1e-12:
        raise SingularValue("residual undefined at y in {0, 1}")
    dy = (ym2 - 8 * ym1 + 8 * yp1 - yp2) / (12 * h)
    d2y = (-ym2 + 16 * ym1 - 30 * y0 + 16 * yp1 - yp2) / (12 * h * h)
    return d2y - _pv_rhs(theta, z, y0, dy)


def _pv_rhs(theta: Theta, z: complex, y: complex, dy: complex) -> complex:
    t0, tx, ti = theta.as_tuple()
    return (
        (1 / (2 * y) + 1 / (y - 1)) * dy * dy
        - dy / z
        + (y - 1) ** 2 / (8 * z * z) * ((t0 - tx + ti) ** 2 * y - (t0 - tx - ti) ** 2 / y)
        + (1 - t0 - tx) * y / z
        - y * (y + 1) / (2 * (y - 1))
    )


def residual_scale(yfun, x: CoverPoint, h_rel: float = 4e-3) -> float:
    """max(1, |y''|) companion scale for residual thresholds."""
    z = x.to_complex()
    h = h_rel * z
    ys = [yfun(x.shifted(k * h)) for k in (-2, -1, 0, 1, 2)]
    d2y = (-ys[0] + 16 * ys[1] - 30 * ys[2] + 16 * ys[3] - ys[4]) / (12 * h * h)
    return max(1.0, abs(d2y))
