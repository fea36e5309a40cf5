"""Constant matrix seeds for the Schlesinger fixed-point construction.

Each seed bundles (L0, Lx, T, L = L0 + Lx) with the algebraic properties
the construction relies on: tr L_i = 0 and det L_i = -theta_i^2 / 4, the
(1,1) entry of L equal to -thetainf/2, and T bringing L to (sigma/2) J
(power kind) or to the upper nilpotent Delta (log kind).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InconsistentKind, SingularT, ZeroSigma
from .theta import Theta

I2 = np.eye(2, dtype=complex)
J = np.diag([1.0 + 0j, -1.0 + 0j])
DELTA = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
DELTA_MINUS = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)


class SeedKind(Enum):
    GENERIC_POWER = "generic-power"
    LOG_JORDAN = "log"
    TAYLOR_DIAG = "taylor"


class LamKind(Enum):
    JORDAN = "jordan"          # thetainf != 0
    DELTA = "delta"            # thetainf == 0, L = Delta
    DELTA_MINUS = "delta-"     # thetainf == 0, L = Delta_minus


class TaylorCase(Enum):
    PLUS = "plus"    # thetax = theta0 != 0
    MINUS = "minus"  # thetax = -theta0 != 0
    ZERO = "zero"    # theta0 = thetax = 0


def inv2(m: np.ndarray) -> np.ndarray:
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    return np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]], dtype=complex) / det


@dataclass(frozen=True)
class SeedMatrices:
    L0: np.ndarray
    Lx: np.ndarray
    T: np.ndarray
    L: np.ndarray
    kind: SeedKind
    theta: Theta
    sigma: complex = 0.0
    sign: int = +1            # log kind: +1 means (T^-1 L0 T)_11 = -thetax/2
    lam_kind: LamKind | None = None
    a: complex = 0.0          # taylor kind parameter

    @property
    def Tinv(self) -> np.ndarray:
        return inv2(self.T)

    def t_frame(self, mat: np.ndarray) -> np.ndarray:
        return self.Tinv @ mat @ self.T


def seed_generic(theta: Theta, sigma: complex) -> SeedMatrices:
    """Power-type seed; entries are rational in (theta, sigma)."""
    sigma = complex(sigma)
    if sigma == 0:
        raise ZeroSigma("power-type seed needs sigma != 0")
    t0, tx, ti = theta.as_tuple()
    p = (sigma**2 + t0**2 - tx**2) / (4.0 * sigma)
    q = ((t0 + tx) ** 2 - sigma**2) * ((t0 - tx) ** 2 - sigma**2) / (16.0 * sigma**2)
    l0p = np.array([[p, 1.0], [-q, -p]], dtype=complex)
    lxp = np.array([[sigma / 2 - p, -1.0], [q, -(sigma / 2 - p)]], dtype=complex)
    T = np.array([[(sigma - ti) / 2, -1.0], [(sigma + ti) / 2, 1.0]], dtype=complex)
    Tinv = inv2(T)
    L0 = T @ l0p @ Tinv
    Lx = T @ lxp @ Tinv
    L = np.array([[-ti / 2, (sigma - ti) / 2], [(sigma + ti) / 2, ti / 2]], dtype=complex)
    return SeedMatrices(L0, Lx, T, L, SeedKind.GENERIC_POWER, theta, sigma=sigma)


def seed_log(theta: Theta, sign: int = +1, lam_kind: LamKind | None = None) -> SeedMatrices:
    """Log-type seed; sign selects (T^-1 L0 T)_11 = -sign * thetax / 2."""
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    t0, tx, ti = theta.as_tuple()
    if lam_kind is None:
        lam_kind = LamKind.JORDAN if ti != 0 else LamKind.DELTA
    if lam_kind is LamKind.JORDAN and ti == 0:
        raise InconsistentKind("Jordan form needs thetainf != 0")
    if lam_kind in (LamKind.DELTA, LamKind.DELTA_MINUS) and ti != 0:
        raise InconsistentKind("nilpotent forms need thetainf == 0")
    s = sign
    l0p = np.array(
        [[-s * tx / 2, 1.0], [(t0**2 - tx**2) / 4, s * tx / 2]], dtype=complex
    )
    lxp = np.array(
        [[s * tx / 2, 0.0], [(tx**2 - t0**2) / 4, -s * tx / 2]], dtype=complex
    )
    if lam_kind is LamKind.JORDAN:
        T = np.array([[-ti / 2, 1.0], [ti / 2, 0.0]], dtype=complex)
        L = 0.5 * ti * np.array([[-1.0, -1.0], [1.0, 1.0]], dtype=complex)
    elif lam_kind is LamKind.DELTA:
        T = I2.copy()
        L = DELTA.copy()
    else:
        T = np.array([[0.0, 1.0], [1.0, -1.0]], dtype=complex)
        L = DELTA_MINUS.copy()
    Tinv = inv2(T)
    L0 = T @ l0p @ Tinv
    Lx = T @ lxp @ Tinv
    return SeedMatrices(
        L0, Lx, T, L, SeedKind.LOG_JORDAN, theta, sign=sign, lam_kind=lam_kind
    )


def seed_taylor(theta0: complex, a: complex, case: TaylorCase) -> SeedMatrices:
    """Taylor-type seed with L0 = -Lx, so L = 0."""
    theta0 = complex(theta0)
    a = complex(a)
    if case is TaylorCase.ZERO:
        if theta0 != 0:
            raise InconsistentKind("case 'zero' needs theta0 = thetax = 0")
        T = np.array([[1.0, 1.0], [a, a - 1.0]], dtype=complex)
        L0 = np.array([[a, -1.0], [a * a, -a]], dtype=complex)
        thetax = 0.0 + 0j
    else:
        if theta0 == 0:
            raise SingularT("similarity matrix is singular at theta0 = 0")
        T = np.array([[1.0, 1.0], [a, theta0 + a]], dtype=complex)
        L0 = np.array(
            [[theta0 / 2 + a, -1.0], [a * (theta0 + a), -theta0 / 2 - a]],
            dtype=complex,
        )
        thetax = theta0 if case is TaylorCase.PLUS else -theta0
    theta = Theta(theta0, thetax, 0.0 + 0j)
    return SeedMatrices(
        L0, -L0, T, np.zeros((2, 2), complex), SeedKind.TAYLOR_DIAG, theta, a=a
    )
