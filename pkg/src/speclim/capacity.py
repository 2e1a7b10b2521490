"""Spectral efficiency of the representative link: exact, bounds, asymptotes.

The exact value is the optimal-decoder mutual information
log2 |I + gamma1 H T H^H (noise I + R)^{-1}| with T the rank-M transmit
covariance built on the channel's top right singular vectors and R the
interference covariance. The upper bound treats the M streams as
non-interfering (Hadamard bound); the lower bound is the rate of a
per-stream MMSE receiver that spends M-1 degrees of freedom nulling the
other streams of the representative transmitter. Asymptotic formulas
combine the limiting Rx array-gain SINR beta with per-stream eigenvalue
quantiles of the Marchenko-Pastur law.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import NumericalError
from .interference import PowerModel
from .mp_law import MpParams, lambda_star, mp_inverse_cdf
from .randmat import SeedSpec, SvdResult, isotropic_unit_vector, quadratic_form_inverse, svd

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class LinkRealization:
    """One Monte-Carlo draw of the representative link and its interference.

    h11 is the N x K channel of the representative link, powers the M stream
    powers of its transmitter, k1 the N x (n M) matrix whose columns carry
    the interferers' stream channels and phi the matching received powers
    (path loss times transmit power). noise is the diagonal value N*sigma2
    of the thermal-noise covariance.
    """

    h11: np.ndarray
    gamma1: float
    powers: np.ndarray
    k1: np.ndarray
    phi: np.ndarray
    noise: float

    def __post_init__(self):
        object.__setattr__(self, "h11", np.asarray(self.h11, dtype=np.complex128))
        object.__setattr__(self, "powers", np.asarray(self.powers, dtype=float))
        object.__setattr__(self, "k1", np.asarray(self.k1, dtype=np.complex128))
        object.__setattr__(self, "phi", np.asarray(self.phi, dtype=float))
        n_rx, k_tx = self.h11.shape
        if k_tx > n_rx:
            raise ValueError(f"transmit antennas must not exceed receive antennas ({k_tx} > {n_rx})")
        if self.powers.ndim != 1 or self.powers.size > k_tx:
            raise ValueError("stream powers must be a vector of length M <= K")
        if np.any(self.powers < 0):
            raise ValueError("stream powers must be non-negative")
        if self.k1.shape[0] != n_rx or self.k1.shape[1] != self.phi.size:
            raise ValueError("interference matrix and phi dimensions disagree")
        if np.any(self.phi < 0):
            raise ValueError("received interference powers must be non-negative")
        if self.gamma1 < 0 or self.noise <= 0:
            raise ValueError("gamma1 must be non-negative and noise positive")

    @property
    def n_rx(self) -> int:
        return self.h11.shape[0]

    @property
    def k_tx(self) -> int:
        return self.h11.shape[1]

    @property
    def m(self) -> int:
        return self.powers.size


class CapacityBounds(NamedTuple):
    lower: float
    exact: float
    upper: float


def tx_covariance(decomp: SvdResult, powers) -> np.ndarray:
    """Rank-M transmit covariance V diag(P1..PM, 0, ...) V^H."""
    powers = np.asarray(powers, dtype=float)
    k = decomp.right.shape[0]
    m = powers.size
    if m > k:
        raise ValueError(f"more stream powers ({m}) than transmit dimensions ({k})")
    if np.any(powers < 0):
        raise ValueError("stream powers must be non-negative")
    v = decomp.right[:, :m]
    return (v * powers) @ v.conj().T


def interference_covariance(k1: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """K Phi K^H for diagonal Phi, hermitized."""
    if k1.shape[1] != phi.size:
        raise ValueError("phi length must match the interference column count")
    if phi.size == 0:
        return np.zeros((k1.shape[0], k1.shape[0]), dtype=np.complex128)
    cov = (k1 * phi) @ k1.conj().T
    return 0.5 * (cov + cov.conj().T)


def rotated_interference_covariance(channels: Sequence[np.ndarray],
                                    rotations: Sequence[np.ndarray],
                                    power_rows: np.ndarray,
                                    gammas: np.ndarray) -> np.ndarray:
    """sum_j gamma_j H_j V_j diag(P_j) V_j^H H_j^H.

    The literal interferer covariance with each interferer's own transmit
    rotation V_j applied. Statistically identical to
    interference_covariance on fresh Gaussian columns, by unitary
    invariance; kept as a validation path.
    """
    power_rows = np.asarray(power_rows, dtype=float)
    gammas = np.asarray(gammas, dtype=float).ravel()
    n_rx = channels[0].shape[0]
    cov = np.zeros((n_rx, n_rx), dtype=np.complex128)
    m = power_rows.shape[1]
    for h, v, prow, g in zip(channels, rotations, power_rows, gammas):
        b = h @ (v[:, :m] * np.sqrt(prow))
        cov += g * (b @ b.conj().T)
    return 0.5 * (cov + cov.conj().T)


def _logdet2(a: np.ndarray) -> float:
    """log2 det of a Hermitian positive-definite matrix via Cholesky."""
    try:
        chol = np.linalg.cholesky(a)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"noise-plus-interference matrix not positive definite: {exc}") from exc
    return 2.0 * float(np.sum(np.log(np.real(np.diag(chol))))) / _LN2


def _noise_plus_interference(link: LinkRealization) -> np.ndarray:
    s = interference_covariance(link.k1, link.phi)
    s[np.diag_indices_from(s)] += link.noise
    return s


def exact_capacity_given_cov(h11: np.ndarray, gamma1: float, powers: np.ndarray,
                             interference: np.ndarray, noise: float) -> float:
    """log2 |I + gamma1 H T H^H S^{-1}| as a difference of two log-determinants.

    Evaluated as log2|S + gamma1 B B^H| - log2|S| with B = H V_M sqrt(P),
    accumulating Cholesky factor diagonals so the wide dynamic range of the
    powers never overflows a determinant.
    """
    s = np.array(interference, dtype=np.complex128)
    s = 0.5 * (s + s.conj().T)
    s[np.diag_indices_from(s)] += noise
    decomp = svd(h11)
    m = np.asarray(powers).size
    b = h11 @ (decomp.right[:, :m] * np.sqrt(np.asarray(powers, dtype=float)))
    signal = gamma1 * (b @ b.conj().T)
    total = s + 0.5 * (signal + signal.conj().T)
    return _logdet2(total) - _logdet2(s)


def exact_capacity(link: LinkRealization) -> float:
    """Spectral efficiency of the representative link, bits/s/Hz."""
    return exact_capacity_given_cov(
        link.h11, link.gamma1, link.powers,
        interference_covariance(link.k1, link.phi), link.noise,
    )


def upper_bound_capacity(link: LinkRealization) -> float:
    """Stream-decoupled upper bound.

    sum_j log2(1 + gamma1 P_j lambda_j u_j^H S^{-1} u_j) over the M streams,
    with u_j the left singular vectors of the link channel.
    """
    decomp = svd(link.h11)
    s = _noise_plus_interference(link)
    total = 0.0
    for j in range(link.m):
        qf = quadratic_form_inverse(decomp.left[:, j], s)
        total += math.log2(1.0 + link.gamma1 * link.powers[j] * decomp.squared[j] * qf)
    return total


def lower_bound_capacity(link: LinkRealization, seed: SeedSpec | None = None) -> float:
    """Per-stream MMSE lower bound with the other streams nulled.

    For stream i the receiver rotates by U^H, drops the M-1 coordinates
    carrying the other streams, and MMSE-detects the remaining
    (N-M+1)-dimensional observation, giving
    SINR_i = gamma1 P_i lambda_i e^H (noise I + Khat_i Phi Khat_i^H)^{-1} e
    with e the kept signal coordinate. A further random unitary cancels
    exactly in this quadratic form, so the value is seed-independent; the
    seed parameter is accepted for interface symmetry with the randomized
    variant below.
    """
    n_rx, m = link.n_rx, link.m
    if n_rx - m + 1 < 1:
        raise ValueError("need at least one residual dimension per stream")
    decomp = svd(link.h11)
    ubar = decomp.left.conj().T @ link.k1 if link.phi.size else None
    total = 0.0
    for i in range(m):
        rows = [i] + list(range(m, n_rx))
        if ubar is None:
            qf = 1.0 / link.noise
        else:
            khat = ubar[rows, :]
            s_i = interference_covariance(khat, link.phi)
            s_i[np.diag_indices_from(s_i)] += link.noise
            e = np.zeros(len(rows), dtype=np.complex128)
            e[0] = 1.0
            qf = quadratic_form_inverse(e, s_i)
        total += math.log2(1.0 + link.gamma1 * link.powers[i] * decomp.squared[i] * qf)
    return total


def lower_bound_capacity_isotropic(link: LinkRealization, seed: SeedSpec) -> float:
    """Distribution-equivalent lower bound with a fresh isotropic direction.

    Replaces the kept-coordinate direction by an independent isotropic unit
    vector. Identical in law to lower_bound_capacity but not realization-wise;
    used to validate the construction statistically.
    """
    n_rx, m = link.n_rx, link.m
    if n_rx - m + 1 < 1:
        raise ValueError("need at least one residual dimension per stream")
    decomp = svd(link.h11)
    ubar = decomp.left.conj().T @ link.k1 if link.phi.size else None
    total = 0.0
    for i in range(m):
        u_hat = isotropic_unit_vector(n_rx - m + 1, seed.substream(i))
        if ubar is None:
            qf = 1.0 / link.noise
        else:
            rows = [i] + list(range(m, n_rx))
            khat = ubar[rows, :]
            s_i = interference_covariance(khat, link.phi)
            s_i[np.diag_indices_from(s_i)] += link.noise
            qf = quadratic_form_inverse(u_hat, s_i)
        total += math.log2(1.0 + link.gamma1 * link.powers[i] * decomp.squared[i] * qf)
    return total


def capacity_bounds(link: LinkRealization) -> CapacityBounds:
    """Lower/exact/upper spectral efficiency of one realization."""
    return CapacityBounds(
        lower=lower_bound_capacity(link),
        exact=exact_capacity(link),
        upper=upper_bound_capacity(link),
    )


@dataclass(frozen=True)
class AsymptoticPrediction:
    """Limiting per-stream SINRs lambda*_j P_j gamma1 beta and their capacity sum."""

    beta: float
    lambda_stars: tuple[float, ...]
    per_stream_sinr: tuple[float, ...]
    total: float


def asymptotic_capacity(beta: float, powers, gamma1: float, n_rx: int,
                        k_tx: int) -> AsymptoticPrediction:
    """Limiting spectral efficiency sum_j log2(1 + lambda*_j P_j gamma1 beta)."""
    if beta < 0:
        raise ValueError("beta must be non-negative")
    powers = np.asarray(powers, dtype=float)
    lams = tuple(lambda_star(n_rx, k_tx, j) for j in range(1, powers.size + 1))
    sinrs = tuple(l * p * gamma1 * beta for l, p in zip(lams, powers))
    total = float(sum(math.log2(1.0 + s) for s in sinrs))
    return AsymptoticPrediction(beta=beta, lambda_stars=lams,
                                per_stream_sinr=sinrs, total=total)


def g_alpha(alpha: float) -> float:
    """((alpha / 2 pi) sin(2 pi / alpha))^(alpha/2)."""
    if alpha <= 2:
        raise ValueError("path-loss exponent must exceed 2")
    return (alpha / (2.0 * math.pi) * math.sin(2.0 * math.pi / alpha)) ** (alpha / 2.0)


def _spatial_stream_sum(model: PowerModel, rho: float, r1: float, alpha: float,
                        n_rx: int, k_tx: int, scale: float) -> float:
    denom = math.pi * rho * r1 * r1 * model.sum_mean_power_frac(alpha)
    bracket = (scale / denom) ** (alpha / 2.0)
    ga = g_alpha(alpha)
    powers = model.representative_powers()
    total = 0.0
    for j, p in enumerate(powers, start=1):
        total += math.log2(1.0 + lambda_star(n_rx, k_tx, j) * p * ga * bracket)
    return total


def spatial_capacity_normalized(model: PowerModel, rho: float, r1: float,
                                alpha: float, n_rx: int, k_tx: int) -> float:
    """Limiting normalized spectral efficiency of a spatial-disk link.

    sum_i log2(1 + lambda*_i P_i G_alpha [1 / (pi rho r1^2 sum_j
    E[P_j^(2/alpha)])]^(alpha/2)), the interference-limited small-b limit.
    """
    return _spatial_stream_sum(model, rho, r1, alpha, n_rx, k_tx, scale=1.0)


def spatial_mean_capacity(model: PowerModel, rho: float, r1: float, alpha: float,
                          n_rx: int, k_tx: int) -> float:
    """Mean spectral-efficiency estimate with the N^(alpha/2) growth restored."""
    if n_rx < 1:
        raise ValueError("need at least one receive antenna")
    return _spatial_stream_sum(model, rho, r1, alpha, n_rx, k_tx, scale=float(n_rx))


def no_csi_mean_capacity(a: float, n_rx: int, m: int, alpha: float) -> float:
    """Mean spectral efficiency without transmit CSI: M log2(1 + G_alpha (N/(A M))^(alpha/2))."""
    if a <= 0:
        raise ValueError("link rank A must be positive")
    return m * math.log2(1.0 + g_alpha(alpha) * (n_rx / (a * m)) ** (alpha / 2.0))


def csi_gain_ratio(a: float, n_rx: int, k_tx: int, m: int, alpha: float) -> float:
    """Ratio of mean spectral efficiency with and without Tx-Link CSI.

    Equal-power transmission with unit total power on both sides; the ratio
    is independent of that power. The with-CSI numerator weights stream j by
    the eigenvalue quantile at the midpoint plotting position (N - j + 1/2)/N,
    which keeps the top stream off the hard bulk edge at finite N.
    """
    if a <= 0:
        raise ValueError("link rank A must be positive")
    params = MpParams.from_ratio(k_tx / n_rx)
    arg = g_alpha(alpha) * (n_rx / (a * m)) ** (alpha / 2.0)
    with_csi = 0.0
    for j in range(1, m + 1):
        lam = mp_inverse_cdf(params, (n_rx - j + 0.5) / n_rx)
        with_csi += math.log2(1.0 + lam * arg)
    return with_csi / no_csi_mean_capacity(a, n_rx, m, alpha)
