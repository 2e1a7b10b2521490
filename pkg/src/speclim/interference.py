"""Transmit-power models, path-loss scenarios and the interference law.

Builds the diagonal of received interference powers (one entry per stream of
each interferer) and the limiting distribution H of those entries, in both
the constant-path-loss and spatial-disk settings. The spatial law is always
expressed in the scaled system where interferer path losses are multiplied
by N^(alpha/2), which makes the law independent of N for a fixed ratio n/N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .randmat import SeedSpec

EQUAL_POWER = "equal-power"
TWO_CLASS = "two-class"

CONSTANT = "constant"
SPATIAL_DISK = "spatial-disk"


@dataclass(frozen=True)
class PowerModel:
    """Per-stream transmit-power law of the interferer population.

    equal-power: every node sends power p on each of its m streams.
    two-class: with probability q a node is class one and sends p1 on all m
    streams; otherwise it is class two and sends p2 on a single stream
    (stream slot 1), leaving the other stream slots silent.
    """

    variant: str
    m: int
    p: float | None = None
    p1: float | None = None
    p2: float | None = None
    q: float | None = None
    p_max: float = 1.0

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("stream count m must be at least 1")
        if self.p_max < 0:
            raise ValueError("total-power cap must be non-negative")
        if self.variant == EQUAL_POWER:
            if self.p is None or self.p < 0:
                raise ValueError("equal-power model needs per-stream power p >= 0")
            if self.m * self.p > self.p_max * (1 + 1e-12):
                raise ValueError("equal-power model violates the total-power cap")
        elif self.variant == TWO_CLASS:
            if self.p1 is None or self.p2 is None or self.q is None:
                raise ValueError("two-class model needs p1, p2 and q")
            if self.p1 < 0 or self.p2 < 0:
                raise ValueError("powers must be non-negative")
            if not 0.0 <= self.q <= 1.0:
                raise ValueError("class-one probability q must lie in [0, 1]")
            if self.m * self.p1 > self.p_max * (1 + 1e-12) or self.p2 > self.p_max * (1 + 1e-12):
                raise ValueError("two-class model violates the total-power cap")
        else:
            raise ValueError(f"unknown power model variant {self.variant!r}")

    @classmethod
    def equal_power(cls, m: int, p: float, p_max: float | None = None) -> "PowerModel":
        return cls(EQUAL_POWER, m, p=p, p_max=m * p if p_max is None else p_max)

    @classmethod
    def two_class(cls, m: int, p1: float, p2: float, q: float,
                  p_max: float | None = None) -> "PowerModel":
        if p_max is None:
            p_max = max(m * p1, p2)
        return cls(TWO_CLASS, m, p1=p1, p2=p2, q=q, p_max=p_max)

    def representative_powers(self) -> np.ndarray:
        """Stream powers of the representative transmitter.

        In two-class experiments the representative link is always class one.
        """
        if self.variant == EQUAL_POWER:
            return np.full(self.m, self.p, dtype=float)
        return np.full(self.m, self.p1, dtype=float)

    def stream_atoms(self, j: int) -> tuple[tuple[float, float], ...]:
        """Atoms (mass, power) of the j-th stream's marginal power law.

        For the two-class model, streams beyond the first place their
        class-two mass at power zero: only the listed positive-power atoms
        carry mass q (all streams) plus 1-q (stream 1 at p2), and the
        remainder is silent.
        """
        if not 1 <= j <= self.m:
            raise ValueError(f"stream index must be in [1, {self.m}], got {j}")
        if self.variant == EQUAL_POWER:
            return ((1.0, float(self.p)),)
        if j == 1:
            return ((self.q, float(self.p1)), (1.0 - self.q, float(self.p2)))
        return ((self.q, float(self.p1)), (1.0 - self.q, 0.0))

    def power_atoms(self) -> tuple[tuple[float, float], ...]:
        """Atoms of the stream-averaged power law (1/m) sum_j f_j, merged by level."""
        acc: dict[float, float] = {}
        for j in range(1, self.m + 1):
            for mass, level in self.stream_atoms(j):
                if mass > 0.0:
                    acc[level] = acc.get(level, 0.0) + mass / self.m
        return tuple((mass, level) for level, mass in sorted(acc.items()))

    def sum_mean_power_frac(self, alpha: float) -> float:
        """sum_j E[P_j^(2/alpha)] over the m streams."""
        expo = 2.0 / alpha
        total = 0.0
        for j in range(1, self.m + 1):
            for mass, level in self.stream_atoms(j):
                if level > 0.0:
                    total += mass * level ** expo
        return total


@dataclass(frozen=True)
class PathLossScenario:
    """Constant path loss to all interferers, or a uniform disk of nodes.

    The spatial variant places n nodes uniformly in a disk whose radius
    satisfies n = rho * pi * R^2, with power-law loss g_t * r^(-alpha) and
    noise sigma2 * N^(-alpha/2) per the scaled-noise convention. The
    constant variant uses a single loss gamma for every interferer, gamma1
    for the representative link, and a fixed noise sigma_bar2.
    """

    variant: str
    gamma: float | None = None
    gamma1: float | None = None
    sigma_bar2: float | None = None
    g_t: float | None = None
    alpha: float | None = None
    rho: float | None = None
    n: int | None = None
    radius: float | None = None
    r1: float | None = None
    sigma2: float | None = None

    @classmethod
    def constant(cls, gamma: float, gamma1: float, sigma_bar2: float) -> "PathLossScenario":
        if gamma < 0 or gamma1 < 0:
            raise ValueError("path losses must be non-negative linear ratios")
        if sigma_bar2 <= 0:
            raise ValueError("noise sigma_bar2 must be positive")
        return cls(CONSTANT, gamma=float(gamma), gamma1=float(gamma1),
                   sigma_bar2=float(sigma_bar2))

    @classmethod
    def spatial(cls, g_t: float, alpha: float, rho: float, n: int, r1: float,
                sigma2: float) -> "PathLossScenario":
        if alpha <= 2:
            raise ValueError(f"path-loss exponent must exceed 2, got {alpha}")
        if rho <= 0:
            raise ValueError("node density rho must be positive")
        if g_t <= 0:
            raise ValueError("gain constant g_t must be positive")
        if n < 0:
            raise ValueError("interferer count must be non-negative")
        if r1 <= 0:
            raise ValueError("representative link length r1 must be positive")
        if sigma2 < 0:
            raise ValueError("noise sigma2 must be non-negative")
        radius = math.sqrt(n / (rho * math.pi)) if n > 0 else 0.0
        return cls(SPATIAL_DISK, g_t=float(g_t), alpha=float(alpha), rho=float(rho),
                   n=int(n), radius=radius, r1=float(r1), sigma2=float(sigma2))

    @property
    def link_rank(self) -> float:
        """A = pi * rho * r1^2, the mean number of interferers inside the link."""
        self._require_spatial()
        return math.pi * self.rho * self.r1 * self.r1

    @property
    def gamma1_spatial(self) -> float:
        self._require_spatial()
        return self.g_t * self.r1 ** (-self.alpha)

    def b_scale(self, n_rx: int) -> float:
        """(pi rho N / n)^(alpha/2), the lower edge of the scaled path-loss law."""
        self._require_spatial()
        if self.n < 1:
            raise ValueError("b is undefined without interferers")
        return (math.pi * self.rho * n_rx / self.n) ** (self.alpha / 2.0)

    def _require_spatial(self):
        if self.variant != SPATIAL_DISK:
            raise ValueError("operation requires the spatial-disk scenario")


def sample_positions(scenario: PathLossScenario, seed: SeedSpec) -> np.ndarray:
    """Radii of n nodes placed uniformly over the disk (density 2r/R^2)."""
    scenario._require_spatial()
    if scenario.n == 0:
        return np.empty(0)
    rng = seed.generator()
    # 1 - U maps [0,1) to (0,1], keeping nodes off the exact center.
    u = 1.0 - rng.random(scenario.n)
    return scenario.radius * np.sqrt(u)


def path_loss(r, scenario: PathLossScenario):
    """Power-law path loss g_t * r^(-alpha) for positive distances."""
    scenario._require_spatial()
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise ValueError("distances must be positive (collocated nodes excluded)")
    out = scenario.g_t * r ** (-scenario.alpha)
    return float(out) if out.ndim == 0 else out


def sample_stream_powers(model: PowerModel, n: int, seed: SeedSpec) -> np.ndarray:
    """n x m matrix of per-stream transmit powers, rows independent."""
    if n < 0:
        raise ValueError("interferer count must be non-negative")
    if model.variant == EQUAL_POWER:
        return np.full((n, model.m), model.p, dtype=float)
    rng = seed.generator()
    class_one = rng.random(n) < model.q
    powers = np.zeros((n, model.m))
    powers[class_one, :] = model.p1
    powers[~class_one, 0] = model.p2
    return powers


def build_phi(path_losses, powers) -> np.ndarray:
    """Diagonal of received interference powers, entry (i-1)m + j = gamma_i * P_ij."""
    path_losses = np.asarray(path_losses, dtype=float).ravel()
    powers = np.asarray(powers, dtype=float)
    if powers.ndim != 2 or powers.shape[0] != path_losses.size:
        raise ValueError(
            f"need one path loss per interferer row, got {path_losses.size} losses "
            f"for power matrix of shape {powers.shape}"
        )
    return (path_losses[:, None] * powers).ravel()


class Edf:
    """Empirical distribution function of a finite sample."""

    def __init__(self, values):
        self.values = np.sort(np.asarray(values, dtype=float).ravel())
        if self.values.size == 0:
            raise ValueError("empirical distribution needs at least one sample")

    def __call__(self, x) -> float:
        return np.searchsorted(self.values, x, side="right") / self.values.size

    def below(self, x) -> float:
        """Left limit: fraction of samples strictly below x."""
        return np.searchsorted(self.values, x, side="left") / self.values.size


@dataclass(frozen=True)
class InterferenceLaw:
    """Limiting law of the received-interference-power diagonal entries.

    A mixture of point masses ``atoms`` (mass, level) and, in the spatial
    case, Pareto-type tail pieces: a piece (weight, edge) contributes CDF
    weight * (1 - (x/edge)^(-2/alpha)) above its lower edge. Tail pieces
    arise from power atoms seen through the scaled disk path-loss law.
    """

    atoms: tuple[tuple[float, float], ...] = ()
    tails: tuple[tuple[float, float], ...] = ()
    alpha: float | None = None

    def __post_init__(self):
        total = sum(m for m, _ in self.atoms) + sum(w for w, _ in self.tails)
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"mixture masses must sum to 1, got {total}")
        if self.tails and (self.alpha is None or self.alpha <= 2):
            raise ValueError("tail pieces require a path-loss exponent alpha > 2")

    @classmethod
    def constant_gamma(cls, model: PowerModel, gamma: float) -> "InterferenceLaw":
        atoms = tuple((mass, gamma * level) for mass, level in model.power_atoms())
        return cls(atoms=atoms)

    @classmethod
    def spatial(cls, model: PowerModel, scenario: PathLossScenario,
                n_rx: int) -> "InterferenceLaw":
        b = scenario.b_scale(n_rx)
        atoms = []
        tails = []
        for mass, level in model.power_atoms():
            if level == 0.0:
                atoms.append((mass, 0.0))
            else:
                tails.append((mass, scenario.g_t * b * level))
        return cls(atoms=tuple(atoms), tails=tuple(tails), alpha=scenario.alpha)

    def cdf(self, x: float) -> float:
        x = float(x)
        if x < 0:
            raise ValueError("received powers are non-negative")
        total = sum(mass for mass, level in self.atoms if level <= x)
        for weight, edge in self.tails:
            if x > edge:
                total += weight * (1.0 - (x / edge) ** (-2.0 / self.alpha))
        return total

    def cdf_below(self, x: float) -> float:
        """Left limit H(x-); differs from cdf only at the point masses."""
        x = float(x)
        if x < 0:
            raise ValueError("received powers are non-negative")
        total = sum(mass for mass, level in self.atoms if level < x)
        for weight, edge in self.tails:
            if x > edge:
                total += weight * (1.0 - (x / edge) ** (-2.0 / self.alpha))
        return total


def analytic_H(model: PowerModel, scenario: PathLossScenario, x: float,
               n_rx: int | None = None) -> float:
    """Limiting e.d.f. of the interference powers evaluated at x.

    Constant scenario: (1/m) sum_j F_j(x / gamma). Spatial scenario: the
    power atoms pushed through the disk path-loss CDF with interference
    pre-scaled by N^(alpha/2), which requires n_rx.
    """
    if x < 0:
        raise ValueError("x must be non-negative")
    return interference_law(model, scenario, n_rx).cdf(x)


def interference_law(model: PowerModel, scenario: PathLossScenario,
                     n_rx: int | None = None) -> InterferenceLaw:
    if scenario.variant == CONSTANT:
        return InterferenceLaw.constant_gamma(model, scenario.gamma)
    if n_rx is None:
        raise ValueError("the spatial law needs the receiver antenna count n_rx")
    return InterferenceLaw.spatial(model, scenario, n_rx)


def _with_interferers(scenario: PathLossScenario, n: int) -> PathLossScenario:
    if scenario.variant == CONSTANT or scenario.n == n:
        return scenario
    return PathLossScenario.spatial(scenario.g_t, scenario.alpha, scenario.rho,
                                    n, scenario.r1, scenario.sigma2)


def sample_phi_realization(model: PowerModel, scenario: PathLossScenario, n: int,
                           n_rx: int, seed: SeedSpec) -> np.ndarray:
    """One realization of the interference-power diagonal (spatial pre-scaled)."""
    scenario = _with_interferers(scenario, n)
    powers = sample_stream_powers(model, n, seed.substream(0))
    if scenario.variant == CONSTANT:
        losses = np.full(n, scenario.gamma)
    else:
        radii = sample_positions(scenario, seed.substream(1))
        losses = n_rx ** (scenario.alpha / 2.0) * path_loss(radii, scenario)
    return build_phi(losses, powers)


def empirical_vs_analytic_distance(model: PowerModel, scenario: PathLossScenario,
                                   n: int, n_rx: int, seed: SeedSpec) -> float:
    """sup_x |H_n(x) - H(x)| over the sampled interference powers."""
    if n < 1:
        raise ValueError("need at least one interferer")
    scenario = _with_interferers(scenario, n)
    phi = sample_phi_realization(model, scenario, n, n_rx, seed)
    law = interference_law(model, scenario, n_rx)
    edf = Edf(phi)
    worst = 0.0
    for x in np.unique(edf.values):
        worst = max(worst, abs(edf(x) - law.cdf(x)),
                    abs(edf.below(x) - law.cdf_below(x)))
    return worst
