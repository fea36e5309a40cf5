"""The parameter triple of the fifth Painleve equation."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Theta:
    """Triple (theta0, thetax, thetainf) of equation parameters."""

    theta0: complex
    thetax: complex
    thetainf: complex

    def as_tuple(self) -> tuple[complex, complex, complex]:
        return (self.theta0, self.thetax, self.thetainf)

    @staticmethod
    def of(theta0, thetax, thetainf) -> "Theta":
        return Theta(complex(theta0), complex(thetax), complex(thetainf))
