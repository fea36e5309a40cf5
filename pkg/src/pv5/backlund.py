"""Parameter substitution, pointwise transformation, and the continuation
law that relates the power families with exponents sigma and sigma - 2.

The pointwise map sends a solution with transformed parameters back to one
with the original parameters; composed with the substitution it yields the
analytic continuation factors and the logarithmic-type behaviours.
"""

from __future__ import annotations

import numpy as np

from .cover import CoverPoint
from .errors import DegenerateGamma, ZeroDenominator
from .theta import Theta


def pi_theta(theta: Theta) -> Theta:
    """(theta0-thetax, theta0+thetax, thetainf) ->
    (1-thetainf, 1-theta0+thetax, theta0+thetax-1), solved componentwise."""
    t0, tx, ti = theta.as_tuple()
    d = 1.0 - ti            # new theta0 - thetax
    s = 1.0 - t0 + tx       # new theta0 + thetax
    return Theta((d + s) / 2.0, (s - d) / 2.0, t0 + tx - 1.0)


def c_factor(theta: Theta, sigma: complex) -> complex:
    """4 sigma^2 (theta0+thetax-sigma) / ((sigma+thetainf)(theta0^2-(sigma+thetax)^2))."""
    t0, tx, ti = theta.as_tuple()
    den = (sigma + ti) * (t0**2 - (sigma + tx) ** 2)
    if den == 0:
        raise ZeroDenominator(f"c-factor pole at sigma={sigma}")
    return 4 * sigma**2 * (t0 + tx - sigma) / den


def ctilde_factor(theta: Theta, sigma: complex) -> complex:
    """The c-factor after the parameter substitution."""
    return c_factor(pi_theta(theta), sigma)


def bhat_pointwise(y: complex, yprime: complex, x: complex, theta: Theta) -> complex:
    """One application of the rational pointwise transformation.

    With theta set to the substituted triple this maps a solution carrying
    those parameters to one carrying the original parameters.
    """
    t0, tx, ti = theta.as_tuple()
    den = (
        x * yprime
        - (t0 - tx + ti) * y * y / 2.0
        + (ti + x) * y
        + (t0 - tx - ti) / 2.0
    )
    if den == 0:
        raise ZeroDenominator("pointwise transformation denominator vanished")
    return 1.0 - 2.0 * x * y / den


def b_of_pi(y: complex, yprime: complex, x: complex, theta: Theta) -> complex:
    """B applied to a solution built at the substituted parameters.

    The input solves the equation at pi(theta); the output solves it at
    theta.  Identical to bhat_pointwise evaluated at pi(theta).
    """
    return bhat_pointwise(y, yprime, x, pi_theta(theta))


def gamma_continuation(theta: Theta, sigma: complex, nu: int) -> complex:
    """Multiplier gamma(sigma, nu) linking rho across a step of 2 in sigma.

    Both the factored and the closed rational forms are evaluated; they must
    agree to 1e-11 relative, and the closed form is returned.
    """
    t0, tx, ti = theta.as_tuple()
    s = sigma - 2 * nu
    den = (
        (ti - s) * (ti + s + 2) * ((s - tx) ** 2 - t0**2) * ((s + 2 + tx) ** 2 - t0**2)
    )
    if den == 0:
        raise DegenerateGamma("closed form denominator vanished")
    closed = 64 * s**2 * (s + 1) ** 4 * (s + 2) ** 2 / den
    try:
        product = (
            0.25
            * (2 * nu - ti - sigma)
            * (sigma - ti - 2 * nu + 2)
            * c_factor(theta, 2 * nu - sigma)
            * c_factor(theta, sigma - 2 * nu + 2)
            * ctilde_factor(theta, sigma - 2 * nu + 1)
            * ctilde_factor(theta, 2 * nu - 1 - sigma)
        )
    except ZeroDenominator as exc:
        raise DegenerateGamma(str(exc)) from exc
    if closed == 0 or not np.isfinite(abs(closed)):
        raise DegenerateGamma("gamma(sigma, nu) is 0 or infinite")
    if abs(product - closed) > 1e-11 * abs(closed):
        raise DegenerateGamma(
            f"factored and closed forms disagree: {product} vs {closed}"
        )
    return closed


def gamma_star(theta: Theta, sigma: complex, nu: int) -> complex:
    """The companion multiplier for the transformed family."""
    t0, tx, ti = theta.as_tuple()
    return (
        0.25
        * (sigma - ti - 2 * nu)
        * (2 * nu - ti - sigma)
        * c_factor(theta, sigma - 2 * nu)
        * c_factor(theta, 2 * nu - sigma)
        * ctilde_factor(theta, 2 * nu + 1 - sigma)
        * ctilde_factor(theta, sigma - 2 * nu + 1)
    )


def continue_handle(handle, nu: int):
    """Rebuild the generic power handle with sigma shifted by -2 nu.

    Moving down a step maps (sigma, rho) to (sigma-2, gamma(sigma,1) rho);
    moving up inverts the factor.  Rebuilding from scratch at the shifted
    parameters exercises the continuation identity as a genuine cross-check
    rather than transporting coefficients.
    """
    from .families import Family, build_power_generic

    if handle.family is not Family.POWER_GENERIC:
        raise ValueError("continuation applies to the generic power family")
    sigma, rho = handle.sigma, handle.rho
    if nu >= 0:
        for _ in range(nu):
            rho = gamma_continuation(handle.theta, sigma, 1) * rho
            sigma = sigma - 2
    else:
        for _ in range(-nu):
            rho = rho / gamma_continuation(handle.theta, sigma + 2, 1)
            sigma = sigma + 2
    return build_power_generic(handle.theta, sigma, rho, handle.n_max, handle.eps0)


def backlund_image(handle, x: CoverPoint, theta_target: Theta) -> complex:
    """Evaluate B(y^pi) at x for a handle built at pi(theta_target)."""
    y, dy = handle.eval_with_derivative(x)
    return b_of_pi(y, dy, x.to_complex(), theta_target)
