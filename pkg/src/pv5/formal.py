"""Dense truncated bivariate series with matrix or scalar coefficients.

A series is sum_{n=0..n_max} sum_{m=m_lo..m_hi} C[n,m] u^n v^m, where u is
the order variable (x, or kappa*t during the fixed-point iteration) and v a
unit monomial (t^sigma for power-type series, log t for log-type).  Orders
above n_max and v-powers outside [m_lo, m_hi] are dropped on every
operation, which keeps the fixed-point iteration exact per retained order.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ResonantSigma

RESONANCE_TOL = 1e-12
# a divisor below RESONANCE_TOL only raises if its coefficient carries weight
RESONANCE_COEFF_TOL = 1e-10


class Series:
    """Truncated series over u^n v^m; coefficients are scalars or 2x2 blocks."""

    __slots__ = ("data", "n_max", "m_lo", "m_hi", "matrix")

    def __init__(self, n_max: int, m_lo: int, m_hi: int, matrix: bool, data=None):
        self.n_max = n_max
        self.m_lo = m_lo
        self.m_hi = m_hi
        self.matrix = matrix
        shape = (n_max + 1, m_hi - m_lo + 1) + ((2, 2) if matrix else ())
        if data is None:
            self.data = np.zeros(shape, dtype=complex)
        else:
            assert data.shape == shape
            self.data = data

    # -- construction -----------------------------------------------------

    @classmethod
    def zeros_like(cls, other: "Series") -> "Series":
        return cls(other.n_max, other.m_lo, other.m_hi, other.matrix)

    @classmethod
    def constant(cls, value, n_max, m_lo, m_hi) -> "Series":
        matrix = np.shape(value) == (2, 2)
        s = cls(n_max, m_lo, m_hi, matrix)
        s.put(0, 0, value)
        return s

    def copy(self) -> "Series":
        return Series(self.n_max, self.m_lo, self.m_hi, self.matrix, self.data.copy())

    # -- indexing ----------------------------------------------------------

    def _col(self, m: int) -> int:
        return m - self.m_lo

    def put(self, n: int, m: int, value) -> None:
        if 0 <= n <= self.n_max and self.m_lo <= m <= self.m_hi:
            self.data[n, self._col(m)] = value

    def add_term(self, n: int, m: int, value) -> None:
        if 0 <= n <= self.n_max and self.m_lo <= m <= self.m_hi:
            self.data[n, self._col(m)] += value

    def term(self, n: int, m: int):
        if 0 <= n <= self.n_max and self.m_lo <= m <= self.m_hi:
            return self.data[n, self._col(m)]
        return np.zeros((2, 2), complex) if self.matrix else 0.0 + 0.0j

    def keys(self):
        """Indices (n, m) of coefficients that are not identically zero."""
        axes = (2, 3) if self.matrix else None
        mask = np.abs(self.data).max(axis=axes) if axes else np.abs(self.data)
        nz = np.argwhere(mask > 0.0)
        return [(int(n), int(c) + self.m_lo) for n, c in nz]

    # -- linear structure ---------------------------------------------------

    def __add__(self, other: "Series") -> "Series":
        out = self.copy()
        out.data += other.data
        return out

    def __sub__(self, other: "Series") -> "Series":
        out = self.copy()
        out.data -= other.data
        return out

    def __neg__(self) -> "Series":
        return self.scale(-1.0)

    def scale(self, c: complex) -> "Series":
        out = self.copy()
        out.data *= c
        return out

    def nshift(self, d: int) -> "Series":
        """Multiply by u^d."""
        out = Series.zeros_like(self)
        if d >= 0:
            out.data[d:] = self.data[: self.n_max + 1 - d]
        else:
            out.data[: self.n_max + 1 + d] = self.data[-d:]
        return out

    def mshift(self, d: int) -> "Series":
        """Multiply by v^d (coefficients pushed outside the window drop)."""
        out = Series.zeros_like(self)
        w = self.m_hi - self.m_lo + 1
        lo = max(0, d)
        hi = min(w, w + d)
        if hi > lo:
            out.data[:, lo:hi] = self.data[:, lo - d : hi - d]
        return out

    def offdiag_mshift(self, d12: int, d21: int) -> "Series":
        """Shift v-powers of the (1,2) entry by d12 and of (2,1) by d21.

        This is conjugation by diag(v^(1/2), v^(-1/2)) on matrix series.
        """
        assert self.matrix
        out = Series.zeros_like(self)
        out.data[..., 0, 0] = self.data[..., 0, 0]
        out.data[..., 1, 1] = self.data[..., 1, 1]
        w = self.m_hi - self.m_lo + 1
        for (i, j), d in (((0, 1), d12), ((1, 0), d21)):
            lo, hi = max(0, d), min(w, w + d)
            if hi > lo:
                out.data[:, lo:hi, i, j] = self.data[:, lo - d : hi - d, i, j]
        return out

    # -- products ------------------------------------------------------------

    def __matmul__(self, other: "Series") -> "Series":
        """Truncated product (matrix product of coefficients when matrix)."""
        if not self.matrix and not other.matrix:
            return self._scalar_fft_mul(other)
        out = Series(self.n_max, self.m_lo, self.m_hi, self.matrix or other.matrix)
        nzl = np.flatnonzero(self._nonzero_rows())
        nzr = np.flatnonzero(other._nonzero_rows())
        for n1 in nzl:
            for n2 in nzr:
                n = int(n1 + n2)
                if n > self.n_max:
                    continue
                a = self.data[n1]
                b = other.data[n2]
                if self.matrix and other.matrix:
                    block = np.einsum("iab,jbc->ijac", a, b)
                elif self.matrix:
                    block = np.einsum("iab,j->ijab", a, b)
                elif other.matrix:
                    block = np.einsum("i,jab->ijab", a, b)
                else:
                    block = np.einsum("i,j->ij", a, b)
                self._accumulate(out, n, block, other)
        return out

    def _scalar_fft_mul(self, other: "Series") -> "Series":
        """Scalar convolution via zero-padded FFT (fast path for expansions)."""
        rows = self.n_max + 1
        wl = self.m_hi - self.m_lo + 1
        wr = other.m_hi - other.m_lo + 1
        fn = 1 << (2 * rows - 1).bit_length()
        fm = 1 << (wl + wr - 1).bit_length()
        fa = np.fft.fft2(self.data, s=(fn, fm))
        fb = np.fft.fft2(other.data, s=(fn, fm))
        conv = np.fft.ifft2(fa * fb)
        out = Series(self.n_max, self.m_lo, self.m_hi, False)
        # full conv index m' = (m1-m_lo)+(m2-other.m_lo); keep window of out
        off = out.m_lo - (self.m_lo + other.m_lo)
        lo = max(off, 0)
        hi = min(off + wl, wl + wr - 1)
        if hi > lo:
            out.data[:, lo - off : hi - off] = conv[:rows, lo:hi]
        return out

    def _accumulate(self, out: "Series", n: int, block, other: "Series") -> None:
        wl = self.m_hi - self.m_lo + 1
        wr = other.m_hi - other.m_lo + 1
        for c1 in range(wl):
            m1 = c1 + self.m_lo
            lo = max(other.m_lo, out.m_lo - m1)
            hi = min(other.m_hi, out.m_hi - m1)
            if hi < lo:
                continue
            src = block[c1, lo - other.m_lo : hi - other.m_lo + 1]
            dst_lo = m1 + lo - out.m_lo
            out.data[n, dst_lo : dst_lo + (hi - lo + 1)] += src

    def _nonzero_rows(self):
        axes = tuple(range(1, self.data.ndim))
        return np.abs(self.data).max(axis=axes) > 0.0

    def lconst(self, mat) -> "Series":
        """Left-multiply every coefficient by the constant 2x2 matrix."""
        assert self.matrix
        out = Series.zeros_like(self)
        out.data = np.einsum("ab,nmbc->nmac", np.asarray(mat, complex), self.data)
        return out

    def rconst(self, mat) -> "Series":
        assert self.matrix
        out = Series.zeros_like(self)
        out.data = np.einsum("nmab,bc->nmac", self.data, np.asarray(mat, complex))
        return out

    def conj_const(self, t, tinv) -> "Series":
        return self.lconst(t).rconst(tinv)

    def entry(self, i: int, j: int) -> "Series":
        """Scalar series of one matrix entry."""
        assert self.matrix
        out = Series(self.n_max, self.m_lo, self.m_hi, False)
        out.data = self.data[..., i, j].copy()
        return out

    # -- calculus -------------------------------------------------------------

    def euler_power(self, sigma: complex) -> "Series":
        """u d/du + sigma * (v d/dv): the Euler operator for v = u^sigma units."""
        out = Series.zeros_like(self)
        n = np.arange(self.n_max + 1)
        m = np.arange(self.m_lo, self.m_hi + 1)
        fac = n[:, None] + sigma * m[None, :]
        shape = fac.shape + (1, 1) if self.matrix else fac.shape
        out.data = self.data * fac.reshape(shape)
        return out

    def euler_log(self) -> "Series":
        """t d/dt when v = log t:  n C[n,m] + (m+1) C[n,m+1]."""
        out = Series.zeros_like(self)
        n = np.arange(self.n_max + 1)
        shape = (self.n_max + 1, 1, 1, 1) if self.matrix else (self.n_max + 1, 1)
        out.data = self.data * n.reshape(shape)
        m1 = np.arange(self.m_lo + 1, self.m_hi + 1)
        shape_m = (1, len(m1), 1, 1) if self.matrix else (1, len(m1))
        out.data[:, :-1] += self.data[:, 1:] * m1.reshape(shape_m)
        return out

    def prim_power(self, sigma: complex) -> "Series":
        """Formal primitive of t^{-1} * self: divide C[n,m] by n + sigma m.

        Requires every nonzero coefficient to sit at n >= 1.  Divisors below
        the resonance threshold are tolerated only for coefficients that are
        numerically negligible (structural zeros contaminated by rounding);
        otherwise ResonantSigma is raised.
        """
        n = np.arange(self.n_max + 1)
        m = np.arange(self.m_lo, self.m_hi + 1)
        div = n[:, None] + sigma * m[None, :]
        small = np.abs(div) < RESONANCE_TOL
        axes = (2, 3) if self.matrix else None
        mags = np.abs(self.data).max(axis=axes) if axes else np.abs(self.data)
        scale = max(1.0, float(mags.max(initial=0.0)))
        if np.any(small):
            bad = small & (mags > RESONANCE_COEFF_TOL * scale)
            if np.any(bad):
                n_bad, m_bad = np.argwhere(bad)[0]
                raise ResonantSigma(
                    f"divisor n + sigma*m ~ 0 at (n, m) = ({n_bad}, {m_bad + self.m_lo})"
                )
        out = Series.zeros_like(self)
        div = np.where(small, 1.0, div)
        shape = div.shape + (1, 1) if self.matrix else div.shape
        out.data = np.where(
            np.broadcast_to(small.reshape(shape), self.data.shape), 0.0, self.data
        ) / div.reshape(shape)
        return out

    def prim_log(self) -> "Series":
        """Formal primitive of t^{-1} * self for v = log t monomials.

        C u^n v^m maps to (C u^n / n) sum_j (-1)^j m!/(n^j (m-j)!) v^(m-j).
        """
        out = Series.zeros_like(self)
        for n in range(1, self.n_max + 1):
            row = self.data[n]
            if not np.abs(row).max() > 0.0:
                continue
            for c in range(row.shape[0]):
                coeff = row[c]
                if not np.abs(coeff).max() > 0.0:
                    continue
                m = c + self.m_lo
                fac = 1.0 / n
                for j in range(0, m + 1):
                    out.add_term(n, m - j, coeff * fac)
                    fac *= -(m - j) / n
        return out

    # -- norms and comparison ---------------------------------------------------

    def max_norm(self) -> float:
        if self.matrix:
            return float(np.abs(self.data).sum(axis=3).max(initial=0.0))
        return float(np.abs(self.data).max(initial=0.0))

    def norm_by_order(self) -> np.ndarray:
        """Max row-sum norm of the coefficients, per order n."""
        if self.matrix:
            per = np.abs(self.data).sum(axis=3).max(axis=(1, 2))
        else:
            per = np.abs(self.data).max(axis=1)
        return per

    def equals(self, other: "Series") -> bool:
        return bool(np.array_equal(self.data, other.data))

    def drop_small(self, tol: float) -> "Series":
        out = self.copy()
        if self.matrix:
            mask = np.abs(out.data).sum(axis=3).max(axis=2) < tol
            out.data[mask] = 0.0
        else:
            out.data[np.abs(out.data) < tol] = 0.0
        return out

    # -- evaluation ----------------------------------------------------------

    def eval(self, log_u: complex, v: complex | None = None, log_v: complex | None = None):
        """Evaluate at u = exp(log_u) and given v (or v = exp(log_v)).

        Using logs for both variables keeps covering-space branches exact.
        Returns the value and the sum of absolute term magnitudes (a local
        scale usable for relative tests).
        """
        if v is None:
            v = np.exp(log_v)
        n = np.arange(self.n_max + 1)
        m = np.arange(self.m_lo, self.m_hi + 1)
        if log_v is not None:
            weights = np.exp(n[:, None] * log_u + m[None, :] * log_v)
        else:
            weights = np.exp(n[:, None] * log_u) * v ** m[None, :]
        if self.matrix:
            val = np.einsum("nm,nmab->ab", weights, self.data)
            scale = float(np.abs(weights[..., None, None] * self.data).sum())
        else:
            val = complex(np.einsum("nm,nm->", weights, self.data))
            scale = float(np.abs(weights * self.data).sum())
        return val, scale


def commutator(a: Series, b: Series) -> Series:
    return (a @ b) - (b @ a)


def geometric_inverse(s: Series, lead: tuple[int, int], tol: float = 1e-13) -> Series:
    """Inverse of a series whose unique minimal term sits at `lead`.

    Writes s = c u^n0 v^j0 h, where the order-zero layer of h is a one-sided
    polynomial in the unit v with constant term 1.  That layer is inverted
    by the stable linear recursion for its reciprocal power series, and the
    higher u-orders follow layer by layer through windowed convolutions:

        g_n = (1/h_0) * ( - sum_{k=1..n} h_k g_{n-k} ).

    Coefficients pushed past the v-index window are discarded, which is the
    usual truncation of a Laurent tail, never fed back, so nothing squares
    up or overflows beyond the true coefficient growth.
    """
    n0, j0 = lead
    c = s.term(n0, j0)
    if c == 0:
        raise ZeroDivisionError("leading coefficient is zero")
    h = s.nshift(-n0).mshift(-j0).scale(1.0 / c)
    width = s.m_hi - s.m_lo + 1
    centre = -s.m_lo
    row0 = h.data[0]
    scale = max(float(np.abs(h.data).max()), 1.0)
    pos = np.flatnonzero(np.abs(row0) > tol * scale)
    if centre not in pos:
        raise ArithmeticError("normalized series lost its unit term")
    if np.all(pos >= centre):
        dirn = +1
    elif np.all(pos <= centre):
        dirn = -1
    else:
        raise ArithmeticError("order-zero layer is two-sided; wrong leading term?")
    # reciprocal of the one-sided polynomial layer, along dirn
    deg = int(np.abs(pos - centre).max(initial=0))
    a = np.array([row0[centre + dirn * k] for k in range(deg + 1)])
    steps = (width - 1 - centre) if dirn > 0 else centre
    inv0_line = np.zeros(steps + 1, dtype=complex)
    inv0_line[0] = 1.0
    for t in range(1, steps + 1):
        acc = 0.0 + 0.0j
        for k in range(1, min(deg, t) + 1):
            acc -= a[k] * inv0_line[t - k]
        inv0_line[t] = acc
    inv0 = np.zeros(width, dtype=complex)
    inv0[centre :: dirn] = inv0_line if dirn > 0 else inv0_line[: centre + 1]
    if dirn < 0:
        inv0 = np.zeros(width, dtype=complex)
        inv0[centre - steps : centre + 1] = inv0_line[::-1]

    def conv(xa, xb):
        full = np.convolve(xa, xb)
        return full[centre : centre + width]

    g = Series(s.n_max, s.m_lo, s.m_hi, False)
    g.data[0] = inv0
    for n in range(1, s.n_max + 1):
        rhs = np.zeros(width, dtype=complex)
        for k in range(1, n + 1):
            if np.abs(h.data[k]).max() == 0.0:
                continue
            rhs -= conv(h.data[k], g.data[n - k])
        g.data[n] = conv(inv0, rhs)
    out = g.scale(1.0 / c).mshift(-j0)
    if n0:
        out = out.nshift(-n0)
    return out
