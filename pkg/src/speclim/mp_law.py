"""Marchenko-Pastur limiting eigenvalue law and its quantiles.

Implements the limiting e.d.f. F_d of the eigenvalues of a normalized
Wishart matrix G G^H / N (G being N x K with IID CN(0,1) entries and
aspect ratio d = K/N <= 1), its bulk density, the functional inverse by
bisection, and the per-stream quantile approximation used by all the
asymptotic capacity formulas.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np
import scipy.integrate

from .errors import NumericalError

_BISECT_TOL = 1e-9
_BISECT_MAX_ITER = 200
_GUARD_TOL = 1e-6


@dataclass(frozen=True)
class MpParams:
    """Aspect ratio d = K/N in (0, 1] and the bulk edges (1 -/+ sqrt(d))^2."""

    d: float
    a1: float
    a2: float

    @classmethod
    def from_ratio(cls, d: float) -> "MpParams":
        if not 0.0 < d <= 1.0:
            raise ValueError(f"aspect ratio must be in (0, 1], got {d}")
        rd = np.sqrt(d)
        return cls(d=float(d), a1=float((1.0 - rd) ** 2), a2=float((1.0 + rd) ** 2))


def _params(p) -> MpParams:
    if isinstance(p, MpParams):
        return p
    return MpParams.from_ratio(float(p))


def mp_pdf(p, x: float) -> float:
    """Bulk density sqrt((a2-x)(x-a1)) / (2 pi x) on (a1, a2), zero elsewhere.

    The point mass max(0, 1-d) at zero is not part of the continuous density;
    it is reported by the CDF.
    """
    p = _params(p)
    x = float(x)
    if not np.isfinite(x):
        raise ValueError("x must be finite")
    if x <= p.a1 or x >= p.a2:
        return 0.0
    return float(np.sqrt((p.a2 - x) * (x - p.a1)) / (2.0 * np.pi * x))


def _bulk_cdf(p: MpParams, x: float) -> float:
    # Antiderivative of the bulk density, with the inverse-trig branch
    # constants fixed so the value is max(0,1-d) at a1 and 1 at a2.
    a1, a2 = p.a1, p.a2
    r = np.sqrt(max((a2 - x) * (x - a1), 0.0))
    half_sum = 0.5 * (a1 + a2)
    z1 = np.clip((2.0 * x - a1 - a2) / (a2 - a1), -1.0, 1.0)
    acc = r + half_sum * (np.arcsin(z1) + 0.5 * np.pi)
    root = np.sqrt(a1 * a2)
    if root > 0.0:
        z2 = np.clip(((a1 + a2) * x - 2.0 * a1 * a2) / ((a2 - a1) * x), -1.0, 1.0)
        acc -= root * (np.arcsin(z2) + 0.5 * np.pi)
    return max(0.0, 1.0 - p.d) + acc / (2.0 * np.pi)


@functools.lru_cache(maxsize=128)
def _verify_closed_form(d: float) -> None:
    # One-time cross-check of the closed form against adaptive quadrature of
    # the bulk density; guards against an inverse-trig branch error. The
    # substitution x = u^2 tames the 1/sqrt(x) behavior of the density when
    # the lower edge sits near zero.
    p = MpParams.from_ratio(d)
    atom = max(0.0, 1.0 - p.d)
    for frac in (0.05, 0.2, 0.5, 0.8, 0.95):
        x = p.a1 + frac * (p.a2 - p.a1)
        u_lo, u_hi = np.sqrt(p.a1), np.sqrt(x)
        # geometric breakpoints keep the square-root edge at the lower bulk
        # boundary visible to the adaptive integrator when a1 is tiny
        knots = [u_lo * 10.0**k for k in range(1, 12) if u_lo * 10.0**k < u_hi]
        quad, _ = scipy.integrate.quad(
            lambda u: 2.0 * u * mp_pdf(p, u * u),
            u_lo, u_hi, points=knots or None, limit=200,
        )
        closed = _bulk_cdf(p, x)
        if abs(closed - (atom + quad)) > _GUARD_TOL:
            raise NumericalError(
                f"closed-form CDF disagrees with quadrature at d={d}, x={x}: "
                f"{closed} vs {atom + quad}"
            )


def mp_cdf(p, x: float) -> float:
    """Limiting e.d.f. F_d evaluated at x >= 0.

    Flat at max(0, 1-d) on [0, a1] (the point mass at zero plus no bulk
    mass), the closed-form bulk integral on (a1, a2), and 1 from a2 on.
    """
    p = _params(p)
    x = float(x)
    if not np.isfinite(x) or x < 0.0:
        raise ValueError(f"x must be a finite non-negative real, got {x}")
    _verify_closed_form(p.d)
    if x <= p.a1:
        return max(0.0, 1.0 - p.d)
    if x >= p.a2:
        return 1.0
    return min(1.0, _bulk_cdf(p, x))


def mp_inverse_cdf(p, q: float) -> float:
    """Solve F_d(x) = q on [a1, a2] by bracketed bisection.

    Valid for q between the zero-mass max(0, 1-d) and 1; probabilities below
    the point mass have no preimage in the bulk.
    """
    p = _params(p)
    q = float(q)
    atom = max(0.0, 1.0 - p.d)
    if not atom <= q <= 1.0:
        raise ValueError(f"quantile must lie in [{atom}, 1], got {q}")
    if q >= 1.0:
        return p.a2
    if q <= atom:
        return p.a1
    lo, hi = p.a1, p.a2
    for _ in range(_BISECT_MAX_ITER):
        mid = 0.5 * (lo + hi)
        val = mp_cdf(p, mid)
        if abs(val - q) <= _BISECT_TOL:
            return mid
        if val < q:
            lo = mid
        else:
            hi = mid
    raise NumericalError(f"quantile bisection did not converge for d={p.d}, q={q}")


def lambda_star(n_rx: int, k_tx: int, j: int) -> float:
    """Quantile approximation of the j-th largest normalized channel eigenvalue.

    Approximates the j-th largest eigenvalue of G G^H / N by the limiting
    distribution evaluated at probability (N - j + 1)/N with d = K/N.
    """
    if not 1 <= j <= k_tx <= n_rx:
        raise ValueError(f"need 1 <= j <= K <= N, got j={j}, K={k_tx}, N={n_rx}")
    p = MpParams.from_ratio(k_tx / n_rx)
    return mp_inverse_cdf(p, (n_rx - j + 1) / n_rx)


def lambda_star_limit(d: float | None = None, finite_k: bool = False) -> float:
    """Crude limits of the largest normalized eigenvalue.

    (1 + sqrt(d))^2 when K scales with N at ratio d, and 1 when K stays
    finite as N grows.
    """
    if finite_k:
        return 1.0
    if d is None:
        raise ValueError("provide an aspect ratio d or set finite_k=True")
    if not 0.0 < d <= 1.0:
        raise ValueError(f"aspect ratio must be in (0, 1], got {d}")
    return float((1.0 + np.sqrt(d)) ** 2)
