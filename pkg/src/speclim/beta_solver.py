"""Limiting Rx array-gain SINR solvers.

The quantity beta solved for here is the limit of the receive-side quadratic
form u^H (N sigma^2 I + K Phi K^H)^{-1} u scaled by N: the SINR gain the
receive array contributes once transmit power, beamforming gain and path
loss are stripped. It is the unique non-negative solution of

    -sigma_bar2 * beta + 1 = beta * c * integral x dH(x) / (1 + x beta)

with H the limiting interference-power law and c the effective-interferer
ratio. This module provides the generic bracketed-bisection solver, closed
forms for the equal-power and two-class constant-path-loss models, the
spatial-disk fixed point plus its interference-limited approximation, and
the quadrature identities behind the spatial derivation.

All integrals with an x^(-2/alpha) endpoint singularity are evaluated after
the substitution x = s^(alpha/(alpha-2)), which removes the singularity
exactly; infinite tails are folded to a finite interval the same way.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.integrate

from .errors import NumericalError
from .interference import InterferenceLaw, PathLossScenario, PowerModel

_RESID_TOL_GENERIC = 1e-10
_RESID_TOL_SPATIAL = 1e-8
_MAX_ITER = 200
_QUAD_OPTS = dict(epsabs=1e-15, epsrel=1e-12, limit=200)


def bisect_root(f, lo: float, hi: float, tol: float, max_iter: int = _MAX_ITER) -> float:
    """Bracketed bisection on f down to |f| <= tol.

    Bisection only (never Newton): every residual in this module is monotone
    in beta, so bisection is unconditionally convergent.
    """
    f_lo, f_hi = f(lo), f(hi)
    if abs(f_lo) <= tol:
        return lo
    if abs(f_hi) <= tol:
        return hi
    if (f_lo > 0.0) == (f_hi > 0.0):
        raise NumericalError(
            f"no sign change in bracket [{lo}, {hi}]: f = {f_lo}, {f_hi}"
        )
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if abs(f_mid) <= tol:
            return mid
        if (f_mid > 0.0) == (f_lo > 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
    raise NumericalError(f"bisection residual did not reach {tol} in {max_iter} steps")


def _quad(fun, lo, hi):
    # full_output=1 keeps the integrator quiet when the requested tolerance
    # sits below what roundoff allows; the returned estimate is still the best
    # available and lands far inside every residual tolerance used here.
    out = scipy.integrate.quad(fun, lo, hi, full_output=1, **_QUAD_OPTS)
    return out[0]


def power_kernel_head(beta: float, alpha: float, lo: float, hi: float) -> float:
    """integral of x^(-2/alpha) / (1 + x beta) over [lo, hi], finite limits.

    The substitution x = s^(alpha/(alpha-2)) removes the endpoint singularity
    exactly; the remaining integrand has a knee at x ~ 1/beta, so the range
    is split there to keep the adaptive quadrature near machine precision
    even when beta is very large.
    """
    if hi <= lo:
        return 0.0
    p = alpha / (alpha - 2.0)
    frac = (alpha - 2.0) / alpha
    s_lo, s_hi = lo ** frac, hi ** frac
    pieces = [s_lo, s_hi]
    if beta > 0.0:
        knee = (1.0 / beta) ** frac
        if s_lo < knee < s_hi:
            pieces = [s_lo, knee, s_hi]
    total = 0.0
    for a, b in zip(pieces[:-1], pieces[1:]):
        total += _quad(lambda s: p / (1.0 + beta * s ** p), a, b)
    return total


def power_kernel_tail(beta: float, alpha: float, lo: float) -> float:
    """integral of x^(-2/alpha) / (1 + x beta) over [lo, infinity)."""
    if beta <= 0.0:
        raise ValueError("the tail integral diverges for beta <= 0")
    half = alpha / 2.0
    return half * _quad(lambda t: 1.0 / (t ** half + beta), 0.0, lo ** (-2.0 / alpha))


def power_kernel(beta: float, alpha: float, lo: float = 0.0) -> float:
    """integral of x^(-2/alpha) / (1 + x beta) over [lo, infinity) by quadrature."""
    split = max(lo, 1.0, 1.0 / beta if beta > 0 else 1.0)
    return power_kernel_head(beta, alpha, lo, split) + power_kernel_tail(beta, alpha, split)


def sinr_integral(law: InterferenceLaw, beta: float) -> float:
    """integral of x dH(x) / (1 + x beta) against the interference law."""
    total = 0.0
    for mass, level in law.atoms:
        if level > 0.0:
            total += mass * level / (1.0 + level * beta)
    for weight, edge in law.tails:
        # Pareto piece: density weight * (2/alpha) * edge^(2/alpha) * x^(-1-2/alpha)
        expo = 2.0 / law.alpha
        total += weight * expo * edge ** expo * power_kernel(beta, law.alpha, edge)
    return total


@dataclass(frozen=True)
class BetaProblem:
    """Inputs to the generic fixed point: ratio c, noise, interference law."""

    c: float
    sigma_bar2: float
    law: InterferenceLaw

    def __post_init__(self):
        if self.c < 0:
            raise ValueError("effective-interferer ratio c must be non-negative")
        if self.sigma_bar2 <= 0:
            raise ValueError("noise sigma_bar2 must be positive")


def solve_beta_generic(problem: BetaProblem) -> float:
    """Solve -s2*beta + 1 = beta*c*int x dH/(1+x beta) on [0, 1/s2] by bisection.

    The left-minus-right residual is 1 at beta = 0 and non-positive at
    beta = 1/sigma_bar2, and is strictly decreasing, so the bracket always
    contains exactly one root.
    """
    s2, c, law = problem.sigma_bar2, problem.c, problem.law

    def residual(beta: float) -> float:
        if beta == 0.0:
            return 1.0
        return 1.0 - s2 * beta - beta * c * sinr_integral(law, beta)

    return bisect_root(residual, 0.0, 1.0 / s2, _RESID_TOL_GENERIC)


def beta_equal_power(c: float, sigma_bar2: float, p: float, gamma: float) -> float:
    """Closed-form limiting SINR for the equal-power constant-loss model.

    Positive root of the quadratic -s2*b + 1 = b*c*P*g / (1 + P*g*b):

        (1-c)/(2 s2) - 1/(2 P g)
            + sqrt((1-c)^2/(4 s2^2) + (1+c)/(2 P g s2) + 1/(4 P^2 g^2))
    """
    if p <= 0 or gamma <= 0:
        raise ValueError("received power P*gamma must be positive")
    if sigma_bar2 <= 0:
        raise ValueError("noise sigma_bar2 must be positive")
    if c < 0:
        raise ValueError("c must be non-negative")
    pg = p * gamma
    radicand = ((1.0 - c) ** 2 / (4.0 * sigma_bar2 ** 2)
                + (1.0 + c) / (2.0 * pg * sigma_bar2)
                + 1.0 / (4.0 * pg * pg))
    return ((1.0 - c) / (2.0 * sigma_bar2) - 1.0 / (2.0 * pg) + math.sqrt(radicand))


@dataclass(frozen=True)
class TwoClassCoefficients:
    """Cubic coefficients t1 b^3 + t2 b^2 + t3 b - 1 = 0 for the two-class model.

    t5^2 = t4^2 - 4 (t2^2 - 3 t1 t3)^3 can be negative, so t5 is stored as a
    complex intermediate.
    """

    t1: float
    t2: float
    t3: float
    t4: float
    t5: complex


def two_class_coefficients(c: float, sigma_bar2: float, gamma: float, p1: float,
                           p2: float, q: float, m: int) -> TwoClassCoefficients:
    """Coefficients of the cleared-denominator form of the two-class fixed point."""
    if min(sigma_bar2, gamma, p1, p2) <= 0:
        raise ValueError("sigma_bar2, gamma, p1, p2 must be positive")
    if not 0.0 <= q <= 1.0:
        raise ValueError("q must lie in [0, 1]")
    if m < 1:
        raise ValueError("m must be at least 1")
    if c < 0:
        raise ValueError("c must be non-negative")
    g2 = gamma * gamma
    t1 = sigma_bar2 * p1 * p2 * g2
    t2 = ((1.0 - q) * c * p1 * p2 * g2 / m + c * q * p1 * p2 * g2
          + (sigma_bar2 - p1 * gamma) * p2 * gamma + sigma_bar2 * p1 * gamma)
    t3 = (-p2 * gamma - p1 * gamma + sigma_bar2
          + (1.0 - q) * c * p2 * gamma / m + q * c * p1 * gamma)
    t4 = 2.0 * t2 ** 3 - 9.0 * t1 * t2 * t3 - 27.0 * t1 ** 2
    t5 = np.sqrt(complex(t4 * t4 - 4.0 * (t2 * t2 - 3.0 * t1 * t3) ** 3))
    return TwoClassCoefficients(t1, t2, t3, t4, complex(t5))


def _cubic_residual(co: TwoClassCoefficients, beta: float) -> float:
    return co.t1 * beta ** 3 + co.t2 * beta ** 2 + co.t3 * beta - 1.0


def _cubic_residual_rel(co: TwoClassCoefficients, beta: float) -> float:
    scale = (abs(co.t1 * beta ** 3) + abs(co.t2 * beta ** 2)
             + abs(co.t3 * beta) + 1.0)
    return abs(_cubic_residual(co, beta)) / scale


def _bisect_cubic(co: TwoClassCoefficients) -> float:
    # The cubic has exactly one positive real root (the two roots introduced
    # by clearing denominators sit at -1/(P1 gamma) and -1/(P2 gamma)).
    hi = 1.0
    for _ in range(400):
        if _cubic_residual(co, hi) > 0.0:
            break
        hi *= 2.0
    else:
        raise NumericalError("could not bracket the positive cubic root")
    return bisect_root(lambda b: -_cubic_residual(co, b), 0.0, hi, 1e-12 * max(1.0, hi))


def beta_two_class(co: TwoClassCoefficients) -> float:
    """Limiting SINR for the two-class model from the cubic root formula.

    All combinations of the principal complex cube roots of (t4 +/- t5)/2
    are formed and filtered for a real, positive root with small cubic
    residual, rather than trusting a single printed branch.
    """
    if co.t1 == 0.0:
        raise NumericalError("degenerate cubic: t1 = 0")
    omega = np.exp(2j * np.pi / 3.0)
    cp = (0.5 * (co.t4 + co.t5)) ** (1.0 / 3.0)
    cm = (0.5 * (co.t4 - co.t5)) ** (1.0 / 3.0)
    wp = (1.0 - 1j * np.sqrt(3.0)) / (6.0 * co.t1)
    wm = (1.0 + 1j * np.sqrt(3.0)) / (6.0 * co.t1)
    best = None
    for a in range(3):
        for b in range(3):
            cand = -co.t2 / (3.0 * co.t1) + wp * (omega ** a) * cp + wm * (omega ** b) * cm
            re, im = float(np.real(cand)), float(np.imag(cand))
            if abs(im) > 1e-8 * max(1.0, abs(re)) or re <= 0.0:
                continue
            resid = _cubic_residual_rel(co, re)
            if resid <= 1e-8 and (best is None or resid < best[1]):
                best = (re, resid)
    if best is None:
        fallback = _bisect_cubic(co)
        raise NumericalError(
            "cubic root formula produced no real positive root with small "
            f"residual; bisection of the cubic gives beta = {fallback}"
        )
    return best[0]


@dataclass(frozen=True)
class SpatialBetaProblem:
    """Inputs to the spatial-disk fixed point in the scaled system.

    b = (pi rho N / n)^(alpha/2) is the lower edge of the scaled path-loss
    law; sigma2 the noise constant of the scaled system.
    """

    rho: float
    alpha: float
    g_t: float
    model: PowerModel
    b: float
    sigma2: float

    def __post_init__(self):
        if self.alpha <= 2:
            raise ValueError("path-loss exponent must exceed 2")
        if self.b <= 0:
            raise ValueError("scale b must be positive")
        if self.rho <= 0 or self.g_t <= 0:
            raise ValueError("rho and g_t must be positive")
        if self.sigma2 < 0:
            raise ValueError("sigma2 must be non-negative")

    @classmethod
    def from_scenario(cls, model: PowerModel, scenario: PathLossScenario,
                      n_rx: int) -> "SpatialBetaProblem":
        return cls(rho=scenario.rho, alpha=scenario.alpha, g_t=scenario.g_t,
                   model=model, b=scenario.b_scale(n_rx), sigma2=scenario.sigma2)


def _stream_atoms(model: PowerModel):
    for j in range(1, model.m + 1):
        yield from model.stream_atoms(j)


def _spatial_main_term(p: SpatialBetaProblem, beta: float) -> float:
    # (2 pi^2 rho (g_t beta)^(2/alpha) / alpha) * csc(2 pi/alpha) * sum_j E[P_j^(2/alpha)]
    expo = 2.0 / p.alpha
    csc = 1.0 / math.sin(2.0 * math.pi / p.alpha)
    return (2.0 * math.pi ** 2 * p.rho * (p.g_t * beta) ** expo / p.alpha
            * csc * p.model.sum_mean_power_frac(p.alpha))


def correction_term(p: SpatialBetaProblem, beta: float) -> float:
    """Finite-network correction of the spatial fixed point.

    (2 pi rho beta g_t^(2/alpha) / alpha) * sum over streams and power atoms
    of mass * power^(2/alpha) * integral_0^(b g_t power) x^(-2/alpha)/(1+x beta) dx.
    Vanishes as b -> 0 whenever total transmit power is bounded.
    """
    if beta == 0.0:
        return 0.0
    expo = 2.0 / p.alpha
    total = 0.0
    for mass, level in _stream_atoms(p.model):
        if level > 0.0 and mass > 0.0:
            total += (mass * level ** expo
                      * power_kernel_head(beta, p.alpha, 0.0, p.b * p.g_t * level))
    return 2.0 * math.pi * p.rho * beta * p.g_t ** expo / p.alpha * total


def solve_beta_spatial(p: SpatialBetaProblem) -> float:
    """Solve the spatial fixed point main(beta) - correction(beta) + beta*sigma2 = 1.

    The left side equals beta*c*int x dH/(1+x beta) + beta*sigma2 for the
    scaled spatial law and is strictly increasing in beta, so a doubling
    search brackets the root and bisection finishes it.
    """

    if p.sigma2 == 0.0:
        # Without noise the left side saturates at c * Pr{received power > 0}
        # as beta grows; below 1 the array nulls all interference and no
        # finite fixed point exists.
        pos_mass = sum(mass for mass, level in _stream_atoms(p.model) if level > 0.0)
        c_eff = math.pi * p.rho * p.model.m / p.b ** (2.0 / p.alpha)
        saturation = c_eff * pos_mass / p.model.m
        if saturation <= 1.0 + 1e-12:
            raise NumericalError(
                "no finite interference-limited fixed point: effective "
                f"interferer mass {saturation:.6g} does not exceed 1"
            )

    def residual(beta: float) -> float:
        if beta == 0.0:
            return -1.0
        return (_spatial_main_term(p, beta) - correction_term(p, beta)
                + beta * p.sigma2 - 1.0)

    hi = 1.0
    for _ in range(200):
        if residual(hi) > 0.0:
            break
        hi *= 2.0
    else:
        raise NumericalError("could not bracket the spatial fixed point")
    return bisect_root(residual, 0.0, hi, _RESID_TOL_SPATIAL)


def beta_spatial_approx(p: SpatialBetaProblem) -> float:
    """Interference-limited approximation of the spatial fixed point.

    Keeps only the main term: beta ~ (1/g_t) * [alpha sin(2 pi/alpha)
    / (2 pi^2 rho sum_j E[P_j^(2/alpha)])]^(alpha/2). Valid when b and
    sigma2 are small.
    """
    if p.alpha <= 2:
        raise ValueError("path-loss exponent must exceed 2")
    total = p.model.sum_mean_power_frac(p.alpha)
    if total <= 0.0:
        raise ValueError("the approximation needs positive transmit power")
    inner = (p.alpha * math.sin(2.0 * math.pi / p.alpha)
             / (2.0 * math.pi ** 2 * p.rho * total))
    return inner ** (p.alpha / 2.0) / p.g_t


def integral_identity_residual(alpha: float, beta: float) -> float:
    """Relative gap between quadrature and the closed power-kernel identity.

    Compares the numerically integrated integral_0^inf x^(-2/alpha)/(1+x beta) dx
    against beta^(2/alpha - 1) * pi * csc(2 pi / alpha).
    """
    if alpha <= 2:
        raise ValueError("path-loss exponent must exceed 2")
    if beta <= 0:
        raise ValueError("beta must be positive")
    quad_val = power_kernel(beta, alpha, 0.0)
    closed = beta ** (2.0 / alpha - 1.0) * math.pi / math.sin(2.0 * math.pi / alpha)
    return abs(quad_val - closed) / closed
