"""Complex Gamma, reciprocal Gamma and digamma.

Double precision throughout: Gamma uses a compensated rational (Spouge)
approximation with reflection for Re z < 1/2, digamma uses upward recurrence
into the asymptotic region.  Poles are reported through GammaValue rather
than raised, and psi_over_gamma carries the finite limit of psi(z)/Gamma(z)
across the nonpositive integers, where a local Taylor model avoids the
0 * inf cancellation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import PoleArgument

EULER_GAMMA = 0.577215664901532860606512090082

# Lanczos approximation, g = 7, 9 terms.  Coefficients are O(1e3) so the
# partial-fraction sum loses at most ~3 digits to cancellation on |z| <= 50.
_LANCZOS_G = 7.0
_LANCZOS_C = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_SQRT_TWO_PI = math.sqrt(2.0 * math.pi)

# Bernoulli numbers B_2k / (2k) for the digamma asymptotic tail.
_PSI_TAIL = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
]

_POLE_TOL = 1e-12
_POG_SWITCH = 1e-6


def _reduce_half(x: float) -> tuple[int, float]:
    n = math.floor(x + 0.5)
    return int(n), x - n


def sinpi(z: complex) -> complex:
    """sin(pi z) with the real part reduced first (exact zeros at integers)."""
    n, r = _reduce_half(z.real)
    val = cmath.sin(math.pi * complex(r, z.imag))
    return -val if n % 2 else val


def cospi(z: complex) -> complex:
    """cos(pi z) with argument reduction."""
    n, r = _reduce_half(z.real)
    val = cmath.cos(math.pi * complex(r, z.imag))
    return -val if n % 2 else val


def cotpi(z: complex) -> complex:
    return cospi(z) / sinpi(z)


def _nearest_nonpositive_int(z: complex) -> tuple[int, complex] | None:
    """(n, z + n) for the nearest pole -n, or None if Re z > 1/2."""
    if z.real > 0.5:
        return None
    n = -int(math.floor(z.real + 0.5))
    if n < 0:
        return None
    return n, z + n


# Stirling coefficients B_2n / (2n (2n-1)).
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
)


def _gamma_core(z: complex) -> complex:
    # valid for Re z >= 1/2
    if abs(z) >= 8.0:
        # Stirling: cancellation-free where the Lanczos sum loses digits
        iz = 1.0 / z
        iz2 = iz * iz
        tail = 0.0 + 0.0j
        p = iz
        for a in _STIRLING:
            tail += a * p
            p *= iz2
        return _SQRT_TWO_PI * cmath.exp((z - 0.5) * cmath.log(z) - z + tail)
    w = z - 1.0
    acc = complex(_LANCZOS_C[0])
    for k in range(1, len(_LANCZOS_C)):
        acc += _LANCZOS_C[k] / (w + k)
    t = w + _LANCZOS_G + 0.5
    return _SQRT_TWO_PI * cmath.exp((w + 0.5) * cmath.log(t) - t) * acc


@dataclass(frozen=True)
class GammaValue:
    """Gamma(z), or at a pole -n the finite limit of psi(z)/Gamma(z)."""

    value: complex
    is_pole: bool = False


def gamma(z: complex) -> GammaValue:
    """Complex Gamma with poles flagged instead of raised.

    At a nonpositive integer -n the returned value is the limit
    psi(-n)/Gamma(-n) = (-1)**(n+1) n!, which is what every formula using
    these matrices needs there.
    """
    z = complex(z)
    near = _nearest_nonpositive_int(z)
    if near is not None and abs(near[1]) < _POLE_TOL:
        n = near[0]
        return GammaValue(complex((-1.0) ** (n + 1) * math.factorial(n)), True)
    if z.real < 0.5:
        return GammaValue(math.pi / (sinpi(z) * _gamma_core(1.0 - z)))
    return GammaValue(_gamma_core(z))


def rgamma(z: complex) -> complex:
    """Entire reciprocal Gamma; exactly 0 at the nonpositive integers."""
    z = complex(z)
    near = _nearest_nonpositive_int(z)
    if near is not None and abs(near[1]) < _POLE_TOL:
        return 0.0 + 0.0j
    if z.real < 0.5:
        return sinpi(z) * _gamma_core(1.0 - z) / math.pi
    return 1.0 / _gamma_core(z)


def digamma(z: complex) -> complex:
    """psi(z) = Gamma'(z)/Gamma(z); raises PoleArgument at 0, -1, -2, ..."""
    z = complex(z)
    near = _nearest_nonpositive_int(z)
    if near is not None and abs(near[1]) < _POLE_TOL:
        raise PoleArgument(f"digamma pole at {z}")
    if z.real < 0.5:
        return digamma(1.0 - z) - math.pi * cotpi(z)
    acc = 0.0 + 0.0j
    w = z
    while abs(w) < 16.0:
        acc -= 1.0 / w
        w += 1.0
    iw2 = 1.0 / (w * w)
    tail = 0.0 + 0.0j
    p = iw2
    for coeff in _PSI_TAIL:
        tail += coeff * p
        p *= iw2
    return acc + cmath.log(w) - 0.5 / w - tail


def _harmonics(n: int) -> tuple[float, float]:
    h1 = sum(1.0 / k for k in range(1, n + 1))
    h2 = sum(1.0 / k**2 for k in range(1, n + 1))
    return h1, h2


def psi_over_gamma(z: complex) -> complex:
    """psi(z)/Gamma(z), finite everywhere.

    Off the poles this is digamma(z) * rgamma(z).  Within 1e-6 of a pole -n
    it switches to the Taylor model of -d/dz (1/Gamma) around -n, whose
    constant term is (-1)**(n+1) n!.
    """
    z = complex(z)
    near = _nearest_nonpositive_int(z)
    if near is not None and abs(near[1]) < _POG_SWITCH:
        n, eps = near
        h1, h2 = _harmonics(n)
        e2 = 0.5 * (h1 * h1 - h2)
        c2 = EULER_GAMMA - h1
        c3 = e2 - h1 * EULER_GAMMA + 0.5 * EULER_GAMMA**2 - math.pi**2 / 12.0
        lead = (-1.0) ** (n + 1) * math.factorial(n)
        return lead * (1.0 + 2.0 * c2 * eps + 3.0 * c3 * eps * eps)
    return digamma(z) * rgamma(z)
