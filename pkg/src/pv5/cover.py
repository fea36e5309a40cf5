"""Arithmetic on the universal covering of the punctured plane.

Points carry (log-modulus, unwound argument), so powers x**s are entire in
the exponent and never see a branch cut.  Membership predicates for the
spiral domains used by the solution families, and exact solves for the
logarithmically equally spaced points on a spiral curve, live here too.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

from .errors import DegenerateSigma

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class CoverPoint:
    """A point of the universal covering of C \\ {0}.

    lnr is log|x| and arg is the unwound argument; arg is never reduced
    modulo 2*pi.
    """

    lnr: float
    arg: float

    def log(self) -> complex:
        return complex(self.lnr, self.arg)

    def to_complex(self) -> complex:
        return cmath.exp(complex(self.lnr, self.arg))

    @staticmethod
    def from_complex(z: complex, arg_hint: float = 0.0) -> "CoverPoint":
        """Lift z to the cover, choosing the branch of arg nearest arg_hint."""
        if z == 0:
            raise ValueError("0 is not on the covering")
        a = cmath.phase(z)
        k = round((arg_hint - a) / TWO_PI)
        return CoverPoint(math.log(abs(z)), a + k * TWO_PI)

    def shifted(self, dz: complex) -> "CoverPoint":
        """The point z + dz, lifted to the branch nearest this point."""
        return CoverPoint.from_complex(self.to_complex() + dz, self.arg)

    def scaled(self, factor: float) -> "CoverPoint":
        """Multiply the modulus by `factor` (same argument)."""
        return CoverPoint(self.lnr + math.log(factor), self.arg)


def cover_pow(x: CoverPoint, s: complex) -> complex:
    """x**s on the covering: exp(s * (log|x| + i arg x)), branch-free."""
    return cmath.exp(s * x.log())


class DomainKind(Enum):
    OMEGA_PLUS = "OmegaPlus"
    OMEGA_MINUS = "OmegaMinus"
    OMEGA = "Omega"
    OMEGA_0 = "Omega0"
    OMEGA_STAR = "OmegaStar"
    D_PLUS = "DPlus"
    D_MINUS = "DMinus"
    D_EVEN = "DEven"
    D_ODD = "DOdd"


@dataclass(frozen=True)
class DomainSpec:
    """One of the spiral domains attached to a solution representation.

    eps0 is the smallness knob of every defining inequality (default 0.05);
    nu indexes the D-domains; theta0cap bounds |arg(rho*x)| and is only
    consulted for the OmegaStar kind.
    """

    kind: DomainKind
    sigma: complex = 0.0
    rho: complex = 1.0
    eps0: float = 0.05
    nu: int = 0
    theta0cap: float = 0.5 * math.pi

    def __post_init__(self):
        if not 0.0 < self.eps0 < 1.0:
            raise ValueError("eps0 must lie in (0, 1)")


def _log_abs(z: complex) -> float:
    return math.log(abs(z))


def in_domain(x: CoverPoint, d: DomainSpec) -> bool:
    """Membership test for x in the domain d.

    All kinds reduce to linear inequalities between log|x| and arg x; the
    boundary steepness is set by d.eps0.
    """
    s = d.sigma
    l1 = -math.log(d.eps0)  # log(1/eps0) > 0
    lr = x.lnr
    ag = s.imag * x.arg
    kind = d.kind

    if kind is DomainKind.OMEGA_PLUS:
        a = s.real * lr + _log_abs(d.rho)
        return a + l1 < ag < a - lr - l1
    if kind is DomainKind.OMEGA_MINUS:
        a = s.real * lr + _log_abs(d.rho)
        return a + lr + l1 < ag < a - l1
    if kind is DomainKind.OMEGA:
        # |x * (rho x^sigma)| < eps0 and |x / (rho x^sigma)| < eps0
        lxi = s.real * lr - ag + _log_abs(d.rho)
        return lr + lxi < -l1 and lr - lxi < -l1
    if kind is DomainKind.OMEGA_0:
        if lr >= -l1:
            return False
        if d.rho == 0:
            return True
        return s.real * lr + _log_abs(d.rho) + l1 < ag
    if kind is DomainKind.OMEGA_STAR:
        if d.rho == 0:
            raise ValueError("OmegaStar needs rho != 0")
        lrho = _log_abs(d.rho)
        arg_rho_x = cmath.phase(d.rho) + x.arg
        return (
            lrho + lr < -l1
            and 0.5 * (lr - lrho) < -l1
            and abs(arg_rho_x) < d.theta0cap
        )
    if kind is DomainKind.D_PLUS:
        a = (s.real - 2 * d.nu) * lr + _log_abs(d.rho)
        return a + l1 < ag < a - lr - l1
    if kind is DomainKind.D_MINUS:
        a = (s.real - 2 * d.nu) * lr + _log_abs(d.rho)
        return a + lr + l1 < ag < a - l1
    if kind is DomainKind.D_EVEN:
        band = (s.real - 2 * d.nu) * lr - ag + _log_abs(d.rho)
        return lr < -l1 and -l1 < band < l1
    if kind is DomainKind.D_ODD:
        band = (s.real - 2 * d.nu + 1) * lr - ag + _log_abs(d.rho)
        return lr < -l1 and -l1 < band < l1
    raise ValueError(f"unknown domain kind {kind}")


@dataclass(frozen=True)
class SpiralCurve:
    """The curve (1 + Re sigma - omega) log|x| - Im sigma * arg x = r0.

    It is a spiral when Re(sigma) != omega - 1 and a ray otherwise.  mu is
    the phase of the seed value the curve passes through; bundling it here
    makes point solving a pure 2x2 linear problem.
    """

    r0: float
    mu: float
    omega: float
    sigma: complex

    @property
    def exponent(self) -> complex:
        """Effective exponent s with x**s constant on the point sequence."""
        return self.sigma + (1.0 - self.omega)

    def is_ray(self) -> bool:
        return self.sigma.real == self.omega - 1.0


def spiral_solve(curve: SpiralCurve, n: int) -> CoverPoint:
    """n-th point of the logarithmic sequence on the curve.

    Solves the two linear equations

        Re(s) lnr - Im(s) arg = r0
        |s|^2 lnr - r0 Re(s) - mu Im(s) = -2 pi n |Im(s)|

    with s the curve's effective exponent; every returned point projects to
    the same value of x**s (namely exp(r0 + i mu)).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    s = curve.exponent
    if s.imag == 0.0:
        raise DegenerateSigma("spiral sequences need Im(sigma) != 0")
    s2 = abs(s) ** 2
    lnr = (curve.r0 * s.real + curve.mu * s.imag - TWO_PI * n * abs(s.imag)) / s2
    arg = (s.real * lnr - curve.r0) / s.imag
    return CoverPoint(lnr, arg)
