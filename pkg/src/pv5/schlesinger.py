"""Fixed-point construction of matrix solutions of the Schlesinger system.

The residue pair (A0(x), Ax(x)) of the rank-2 linear system is built as a
truncated formal series by a contraction that gains one order per sweep, so
the truncated iterate stabilizes exactly.  Three series rings are used:
power-type monomials x^n (rho x^sigma)^m, log-type monomials x^n log^m, and
plain Taylor series in x/2.  All sweeps run in the similarity frame of the
seed, where conjugation by the leading power is a cheap index shift.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .cover import CoverPoint
from .errors import EqualThetaSquares, Pv5Error
from .formal import Series, commutator
from .seeds import DELTA, J, SeedKind, SeedMatrices

DEFAULT_TRUNC = 12


class RingKind(Enum):
    POWER = "power"
    LOG = "log"
    TAYLOR = "taylor"


def _window(kind: RingKind, n_max: int) -> tuple[int, int]:
    if kind is RingKind.POWER:
        return (-(n_max + 4), n_max + 4)
    if kind is RingKind.LOG:
        return (0, 2 * n_max + 6)
    return (0, 0)


def _const(mat, kind: RingKind, n_max: int) -> Series:
    lo, hi = _window(kind, n_max)
    return Series.constant(np.asarray(mat, complex), n_max, lo, hi)


def _zero(kind: RingKind, n_max: int) -> Series:
    lo, hi = _window(kind, n_max)
    return Series(n_max, lo, hi, matrix=True)


def _commut_const(mat, s: Series) -> Series:
    return s.lconst(mat) - s.rconst(mat)


class _Frame:
    """Conjugation by the leading power of t, in the seed's T-frame."""

    def __init__(self, seed: SeedMatrices):
        self.kind = (
            RingKind.POWER
            if seed.kind is SeedKind.GENERIC_POWER
            else RingKind.LOG
            if seed.kind is SeedKind.LOG_JORDAN
            else RingKind.TAYLOR
        )

    def up(self, s: Series) -> Series:
        if self.kind is RingKind.POWER:
            return s.offdiag_mshift(+1, -1)
        if self.kind is RingKind.LOG:
            d = _commut_const(DELTA, s).mshift(1)
            d2 = s.lconst(DELTA).rconst(DELTA).mshift(2)
            return s + d - d2
        return s

    def down(self, s: Series) -> Series:
        if self.kind is RingKind.POWER:
            return s.offdiag_mshift(-1, +1)
        if self.kind is RingKind.LOG:
            d = _commut_const(DELTA, s).mshift(1)
            d2 = s.lconst(DELTA).rconst(DELTA).mshift(2)
            return s - d - d2
        return s


def _prim(seed: SeedMatrices, s: Series) -> Series:
    if seed.kind is SeedKind.GENERIC_POWER:
        return s.prim_power(seed.sigma)
    return s.prim_log()


def picard(seed: SeedMatrices, n_max: int = DEFAULT_TRUNC) -> tuple[Series, Series]:
    """Iterate the two-step update from (0, 0) until exact stabilization.

    Returns (U0, Uinf) in the global frame.  Each sweep gains one order, so
    the truncated iterate at sweep n_max+1 reproduces sweep n_max exactly;
    that equality is asserted here rather than trusted.
    """
    v0, vinf = picard_frames(seed, n_max)
    if _Frame(seed).kind is RingKind.TAYLOR:
        return v0, vinf
    t, tinv = seed.T, seed.Tinv
    return v0.conj_const(t, tinv), vinf.conj_const(t, tinv)


def picard_frames(seed: SeedMatrices, n_max: int = DEFAULT_TRUNC) -> tuple[Series, Series]:
    """Fixed point of the sweep, in the seed's similarity frame."""
    frame = _Frame(seed)
    kind = frame.kind
    if kind is RingKind.TAYLOR:
        # no leading power here: iterate in the global frame with [J, .]
        lp0 = _const(seed.L0, kind, n_max)
        jp = np.asarray(J)
    else:
        lp0 = _const(seed.t_frame(seed.L0), kind, n_max)
        lpx = _const(seed.t_frame(seed.Lx), kind, n_max)
        jp = seed.t_frame(J) / 2.0
    v0 = _zero(kind, n_max)
    vinf = _zero(kind, n_max)
    for _ in range(n_max + 3):
        if kind is RingKind.TAYLOR:
            w = vinf - lp0 - v0
            vinf_new = _prim(seed, _commut_const(jp, w).nshift(1))
            v0_new = _prim(seed, commutator(vinf_new, lp0 + v0))
        else:
            w = frame.up(lpx - v0) + vinf
            vinf_new = _prim(seed, _commut_const(jp, w).nshift(1))
            v0_new = _prim(seed, commutator(frame.down(vinf_new), lp0 + v0))
        if vinf_new.equals(vinf) and v0_new.equals(v0):
            break
        v0, vinf = v0_new, vinf_new
    else:
        raise Pv5Error("fixed-point sweep failed to stabilize")
    return v0, vinf


@dataclass
class APair:
    """Truncated series for the residue matrices A0(x), Ax(x).

    Power kind: coefficients multiply x^n (rho_int x^sigma)^m.
    Log kind:   coefficients multiply x^n log(rho_int x)^m.
    Taylor kind: coefficients multiply (x/2)^n.
    """

    seed: SeedMatrices
    kind: RingKind
    A0: Series
    Ax: Series
    rho_int: complex
    n_max: int

    @property
    def sigma(self) -> complex:
        return self.seed.sigma

    def log_unit(self, x: CoverPoint):
        """(log_u, v, log_v) arguments for Series.eval at the cover point x."""
        lx = x.log()
        if self.kind is RingKind.POWER:
            return lx, None, cmath.log(self.rho_int) + self.sigma * lx
        if self.kind is RingKind.LOG:
            return lx, cmath.log(self.rho_int) + lx, None
        return lx - cmath.log(2.0), 1.0, None

    def eval(self, x: CoverPoint) -> tuple[np.ndarray, np.ndarray]:
        log_u, v, log_v = self.log_unit(x)
        a0, _ = self.A0.eval(log_u, v=v, log_v=log_v)
        ax, _ = self.Ax.eval(log_u, v=v, log_v=log_v)
        return a0, ax


def assemble(seed: SeedMatrices, u0: Series, uinf: Series, rho: complex) -> APair:
    """Dress (U0, Uinf) into the residue pair.

    A0 = t^L (L0 + U0) t^-L and Ax = t^L (Lx - U0) t^-L + Uinf, with the
    conjugation realized as an index shift in the seed frame.
    """
    frame = _Frame(seed)
    kind = frame.kind
    n_max = u0.n_max
    t, tinv = seed.T, seed.Tinv
    if kind is RingKind.TAYLOR:
        a0 = _const(seed.L0, kind, n_max) + u0
        ax = _const(seed.Lx, kind, n_max) - u0 + uinf
        return APair(seed, kind, a0, ax, 1.0, n_max)
    v0 = u0.conj_const(tinv, t)
    vinf = uinf.conj_const(tinv, t)
    lp0 = _const(seed.t_frame(seed.L0), kind, n_max)
    lpx = _const(seed.t_frame(seed.Lx), kind, n_max)
    b0 = frame.up(lp0 + v0)
    bx = frame.up(lpx - v0) + vinf
    return APair(seed, kind, b0.conj_const(t, tinv), bx.conj_const(t, tinv), rho, n_max)


def build_apair(seed: SeedMatrices, rho: complex, n_max: int = DEFAULT_TRUNC) -> APair:
    u0, uinf = picard(seed, n_max)
    return assemble(seed, u0, uinf, rho)


def residual_norms(pair: APair) -> tuple[np.ndarray, np.ndarray]:
    """Coefficient norms, per order, of both deformation equations.

    First: x dA0/dx - [Ax, A0].  Second: x dAx/dx - [A0, Ax] - (x/2)[J, Ax].
    Orders above n_max - 1 are truncation-polluted and excluded by callers.
    """
    a0, ax = pair.A0, pair.Ax
    if pair.kind is RingKind.POWER:
        e0 = a0.euler_power(pair.sigma)
        ex = ax.euler_power(pair.sigma)
        half_x = 0.5
    elif pair.kind is RingKind.LOG:
        e0 = a0.euler_log()
        ex = ax.euler_log()
        half_x = 0.5
    else:
        e0 = a0.euler_power(0.0)
        ex = ax.euler_power(0.0)
        half_x = 1.0  # u = x/2 already
    r1 = e0 - commutator(ax, a0)
    r2 = ex - commutator(a0, ax) - _commut_const(J, ax).nshift(1).scale(half_x)
    return r1.norm_by_order(), r2.norm_by_order()


def normalize_ilog(pair: APair, rho: complex) -> APair:
    """Sign-independent form of a log-kind pair.

    Folds the sign-dependent rho shift exp(-sign * 2 thetax/(theta0^2 -
    thetax^2)) into the series by re-expanding log(rho_int x) around
    log(rho x); the two seed signs then give identical coefficients.
    """
    if pair.kind is not RingKind.LOG:
        raise Pv5Error("normalization applies to log-kind pairs")
    t0, tx, _ = pair.seed.theta.as_tuple()
    if t0 * t0 == tx * tx:
        raise EqualThetaSquares("needs theta0^2 != thetax^2")
    # re-expand log(rho_int x) powers around log(rho x)
    c = cmath.log(pair.rho_int) - cmath.log(complex(rho))
    a0 = _subst_vshift(pair.A0, c)
    ax = _subst_vshift(pair.Ax, c)
    return APair(pair.seed, pair.kind, a0, ax, complex(rho), pair.n_max)


def rho_shift_factor(theta, sign: int = -1) -> complex:
    """exp(sign * 2 thetax / (theta0^2 - thetax^2)), the rho normalization."""
    t0, tx, _ = theta.as_tuple()
    if t0 * t0 == tx * tx:
        raise EqualThetaSquares("needs theta0^2 != thetax^2")
    return cmath.exp(sign * 2.0 * tx / (t0 * t0 - tx * tx))


def _subst_vshift(s: Series, c: complex) -> Series:
    """Substitute v -> v + c (binomial re-expansion of log powers)."""
    if c == 0:
        return s.copy()
    out = Series.zeros_like(s)
    from math import comb

    for n, m in s.keys():
        coeff = s.term(n, m)
        p = 1.0 + 0.0j
        for k in range(m, -1, -1):
            out.add_term(n, k, coeff * comb(m, k) * p)
            p *= c
    return out
