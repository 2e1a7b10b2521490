"""Experiment orchestration: seeded trials, aggregation, convergence reports.

Each trial is a pure function of (root_seed, N, M, trial index): the seed
chain root -> N -> M -> trial -> draw isolates every random draw, so
rerunning any subset of the grid reproduces identical values and inserting
extra trials never perturbs existing ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import beta_solver, capacity
from .interference import (
    PathLossScenario,
    PowerModel,
    build_phi,
    path_loss,
    sample_positions,
    sample_stream_powers,
)
from .randmat import SeedSpec, sample_cn_matrix

EXPERIMENTS = (
    "const-equal",
    "const-two-class",
    "spatial-equal",
    "spatial-two-class",
    "csi-gain",
)


@dataclass(frozen=True)
class PowerSpec:
    """Power-model template; the per-stream model is built once M is known.

    equal-power experiments spread p_total over the M streams; two-class
    experiments use (p1, p2, q) with the representative link in class one.
    """

    variant: str
    p_total: float = 1.0
    p1: float = 0.5
    p2: float = 1.0
    q: float = 0.5

    def model(self, m: int) -> PowerModel:
        if self.variant == "equal-power":
            return PowerModel.equal_power(m, self.p_total / m, p_max=self.p_total)
        return PowerModel.two_class(m, self.p1, self.p2, self.q)


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    n_rx_list: tuple[int, ...]
    m_list: tuple[int, ...]
    trials: int
    root_seed: int
    power: PowerSpec
    k_fixed: int | None = None          # None: K = N
    n_ratio: float | None = None        # interferers per receive antenna
    n_fixed: int | None = None
    normalized: bool = False            # spatial SINR normalization
    gamma: float | None = None          # constant interferer path loss
    gamma1: float | None = None         # constant representative path loss
    sigma_bar2: float | None = None     # constant-model noise
    g_t: float | None = None            # spatial gain constant
    alpha: float | None = None
    rho: float | None = None
    link_rank: float | None = None      # A = pi rho r1^2
    sigma2: float | None = None         # spatial noise constant
    a_grid: tuple[float, ...] = ()      # csi-gain link-rank sweep

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValueError(
                f"unknown experiment {self.experiment!r}; valid ids: {', '.join(EXPERIMENTS)}"
            )
        if self.trials < 1:
            raise ValueError("trials ≥ 1")
        if not self.n_rx_list:
            raise ValueError("need at least one antenna count N")
        if not self.m_list or any(m < 1 for m in self.m_list):
            raise ValueError("stream counts M must be positive")
        k_of = lambda n: self.k_fixed if self.k_fixed is not None else n
        for n_rx in self.n_rx_list:
            if k_of(n_rx) > n_rx:
                raise ValueError(f"K = {k_of(n_rx)} exceeds N = {n_rx}")
            if max(self.m_list) > k_of(n_rx):
                raise ValueError(f"M = {max(self.m_list)} exceeds K = {k_of(n_rx)}")
        if self.experiment.startswith("const"):
            if self.gamma is None or self.gamma1 is None or self.sigma_bar2 is None:
                raise ValueError("constant-path-loss experiments need gamma, gamma1, sigma_bar2")
            if (self.n_ratio is None) == (self.n_fixed is None):
                raise ValueError("set exactly one of n_ratio and n_fixed")
        elif self.experiment.startswith("spatial"):
            if None in (self.g_t, self.alpha, self.rho, self.link_rank, self.sigma2):
                raise ValueError("spatial experiments need g_t, alpha, rho, link_rank, sigma2")
            if (self.n_ratio is None) == (self.n_fixed is None):
                raise ValueError("set exactly one of n_ratio and n_fixed")
        else:  # csi-gain
            if not self.a_grid or any(a <= 0 for a in self.a_grid):
                raise ValueError("csi-gain needs a positive link-rank grid A")
            if self.alpha is None:
                raise ValueError("csi-gain needs a path-loss exponent alpha")

    def k_for(self, n_rx: int) -> int:
        return self.k_fixed if self.k_fixed is not None else n_rx

    def interferers_for(self, n_rx: int) -> int:
        if self.n_fixed is not None:
            return self.n_fixed
        n = int(round(self.n_ratio * n_rx))
        if n < 0:
            raise ValueError("interferer rule resolved to a negative count")
        return n

    @property
    def r1(self) -> float:
        return math.sqrt(self.link_rank / (math.pi * self.rho))


@dataclass(frozen=True)
class TrialRecord:
    experiment: str
    n_rx: int
    k_tx: int
    m: int
    n_interferers: int
    trial: int
    seed: int
    cap_exact: float
    cap_upper: float
    cap_lower: float
    normalized: bool


@dataclass(frozen=True)
class AggregateStats:
    experiment: str
    n_rx: int
    k_tx: int
    m: int
    n_interferers: int
    trials: int
    mean: float
    std: float
    asymptote: float
    rel_dev_mean: float
    rel_dev_max: float


def _trial_seed(root_seed: int, n_rx: int, m: int, trial: int) -> SeedSpec:
    return SeedSpec(root_seed).substream(n_rx).substream(m).substream(trial)


def aggregate(records: Sequence[TrialRecord], asymptote: float) -> AggregateStats:
    """Mean / sample std / deviations vs the asymptote, order-independent.

    Compensated summation makes the statistics identical under permutation
    of the trial list. A single trial reports std as NaN rather than a
    misleading zero.
    """
    if not records:
        raise ValueError("cannot aggregate an empty trial list")
    values = [r.cap_exact for r in records]
    n = len(values)
    mean = math.fsum(values) / n
    if n > 1:
        std = math.sqrt(math.fsum((v - mean) ** 2 for v in values) / (n - 1))
    else:
        std = float("nan")
    if asymptote != 0.0:
        rel_mean = abs(mean - asymptote) / abs(asymptote)
        rel_max = max(abs(v - asymptote) for v in values) / abs(asymptote)
    else:
        rel_mean = rel_max = float("nan")
    first = records[0]
    return AggregateStats(
        experiment=first.experiment, n_rx=first.n_rx, k_tx=first.k_tx, m=first.m,
        n_interferers=first.n_interferers, trials=n, mean=mean, std=std,
        asymptote=asymptote, rel_dev_mean=rel_mean, rel_dev_max=rel_max,
    )


def _simulate_constant_trial(config: ExperimentConfig, model: PowerModel,
                             n_rx: int, k_tx: int, n: int,
                             seed: SeedSpec) -> capacity.CapacityBounds:
    h11 = sample_cn_matrix(n_rx, k_tx, seed.substream(0))
    if n > 0:
        k1 = sample_cn_matrix(n_rx, n * model.m, seed.substream(1))
        powers = sample_stream_powers(model, n, seed.substream(2))
        phi = build_phi(np.full(n, config.gamma), powers)
    else:
        k1 = np.zeros((n_rx, 0), dtype=complex)
        phi = np.zeros(0)
    link = capacity.LinkRealization(
        h11=h11, gamma1=config.gamma1, powers=model.representative_powers(),
        k1=k1, phi=phi, noise=n_rx * config.sigma_bar2,
    )
    return capacity.capacity_bounds(link)


def _constant_asymptote(config: ExperimentConfig, model: PowerModel,
                        n_rx: int, k_tx: int, n: int) -> float:
    c = n * model.m / n_rx
    if config.experiment == "const-equal":
        beta = beta_solver.beta_equal_power(c, config.sigma_bar2, model.p, config.gamma)
    else:
        coeffs = beta_solver.two_class_coefficients(
            c, config.sigma_bar2, config.gamma, model.p1, model.p2, model.q, model.m)
        beta = beta_solver.beta_two_class(coeffs)
    return capacity.asymptotic_capacity(
        beta, model.representative_powers(), config.gamma1, n_rx, k_tx).total


def run_constant_pathloss(config: ExperimentConfig):
    """Run the constant-path-loss grid; returns (stats, trial records)."""
    if not config.experiment.startswith("const"):
        raise ValueError("config is not a constant-path-loss experiment")
    all_stats, all_records = [], []
    for n_rx in config.n_rx_list:
        k_tx = config.k_for(n_rx)
        for m in config.m_list:
            model = config.power.model(m)
            n = config.interferers_for(n_rx)
            records = []
            for t in range(config.trials):
                seed = _trial_seed(config.root_seed, n_rx, m, t)
                bounds = _simulate_constant_trial(config, model, n_rx, k_tx, n, seed)
                records.append(TrialRecord(
                    experiment=config.experiment, n_rx=n_rx, k_tx=k_tx, m=m,
                    n_interferers=n, trial=t, seed=seed.derived(),
                    cap_exact=bounds.exact, cap_upper=bounds.upper,
                    cap_lower=bounds.lower, normalized=False,
                ))
            asym = _constant_asymptote(config, model, n_rx, k_tx, n)
            all_stats.append(aggregate(records, asym))
            all_records.extend(records)
    return all_stats, all_records


def _simulate_spatial_trial(config: ExperimentConfig, model: PowerModel,
                            scenario: PathLossScenario, n_rx: int, k_tx: int,
                            seed: SeedSpec) -> capacity.CapacityBounds:
    h11 = sample_cn_matrix(n_rx, k_tx, seed.substream(0))
    n = scenario.n
    scale = n_rx ** (scenario.alpha / 2.0) if config.normalized else 1.0
    if n > 0:
        k1 = sample_cn_matrix(n_rx, n * model.m, seed.substream(1))
        powers = sample_stream_powers(model, n, seed.substream(2))
        radii = sample_positions(scenario, seed.substream(3))
        phi = build_phi(scale * path_loss(radii, scenario), powers)
    else:
        k1 = np.zeros((n_rx, 0), dtype=complex)
        phi = np.zeros(0)
    sigma_bar2 = scenario.sigma2 * n_rx ** (-scenario.alpha / 2.0)
    link = capacity.LinkRealization(
        h11=h11, gamma1=scenario.gamma1_spatial, powers=model.representative_powers(),
        k1=k1, phi=phi, noise=n_rx * sigma_bar2 * scale,
    )
    return capacity.capacity_bounds(link)


def run_spatial(config: ExperimentConfig):
    """Run the spatial-disk grid; returns (stats, trial records)."""
    if not config.experiment.startswith("spatial"):
        raise ValueError("config is not a spatial experiment")
    all_stats, all_records = [], []
    for n_rx in config.n_rx_list:
        k_tx = config.k_for(n_rx)
        for m in config.m_list:
            model = config.power.model(m)
            n = config.interferers_for(n_rx)
            scenario = PathLossScenario.spatial(
                g_t=config.g_t, alpha=config.alpha, rho=config.rho, n=n,
                r1=config.r1, sigma2=config.sigma2)
            records = []
            for t in range(config.trials):
                seed = _trial_seed(config.root_seed, n_rx, m, t)
                bounds = _simulate_spatial_trial(config, model, scenario, n_rx, k_tx, seed)
                records.append(TrialRecord(
                    experiment=config.experiment, n_rx=n_rx, k_tx=k_tx, m=m,
                    n_interferers=n, trial=t, seed=seed.derived(),
                    cap_exact=bounds.exact, cap_upper=bounds.upper,
                    cap_lower=bounds.lower, normalized=config.normalized,
                ))
            if config.normalized:
                asym = capacity.spatial_capacity_normalized(
                    model, config.rho, config.r1, config.alpha, n_rx, k_tx)
            else:
                asym = capacity.spatial_mean_capacity(
                    model, config.rho, config.r1, config.alpha, n_rx, k_tx)
            all_stats.append(aggregate(records, asym))
            all_records.extend(records)
    return all_stats, all_records


@dataclass(frozen=True)
class CsiGainRow:
    a: float
    n_rx: int
    k_tx: int
    m: int
    alpha: float
    cap_csi: float
    cap_nocsi: float
    ratio: float


def run_csi_gain(config: ExperimentConfig) -> list[CsiGainRow]:
    """Analytic CSI-gain sweep over the link-rank grid; no Monte-Carlo."""
    if config.experiment != "csi-gain":
        raise ValueError("config is not the csi-gain experiment")
    rows = []
    for n_rx in config.n_rx_list:
        k_tx = config.k_for(n_rx)
        for m in config.m_list:
            for a in config.a_grid:
                ratio = capacity.csi_gain_ratio(a, n_rx, k_tx, m, config.alpha)
                nocsi = capacity.no_csi_mean_capacity(a, n_rx, m, config.alpha)
                rows.append(CsiGainRow(
                    a=a, n_rx=n_rx, k_tx=k_tx, m=m, alpha=config.alpha,
                    cap_csi=ratio * nocsi, cap_nocsi=nocsi, ratio=ratio,
                ))
    return rows


def run_experiment(config: ExperimentConfig):
    """Dispatch on the experiment id; csi-gain returns (rows, None)."""
    if config.experiment.startswith("const"):
        return run_constant_pathloss(config)
    if config.experiment.startswith("spatial"):
        return run_spatial(config)
    return run_csi_gain(config), None


@dataclass(frozen=True)
class ConvergenceRow:
    n_rx: int
    mean: float
    std: float
    rel_dev_mean: float
    rel_dev_max: float
    within_15pct: bool
    within_10pct: bool


@dataclass(frozen=True)
class ConvergenceReport:
    rows: tuple[ConvergenceRow, ...]
    std_non_increasing: bool

    def to_text(self) -> str:
        lines = ["N    mean        std         dev_mean  dev_max   <15%  <10%"]
        for r in self.rows:
            lines.append(
                f"{r.n_rx:<4d} {r.mean:<11.5g} {r.std:<11.5g} "
                f"{r.rel_dev_mean:<9.4f} {r.rel_dev_max:<9.4f} "
                f"{'y' if r.within_15pct else 'n'}     {'y' if r.within_10pct else 'n'}"
            )
        lines.append(
            "std non-increasing over the two largest N: "
            + ("yes" if self.std_non_increasing else "no")
        )
        return "\n".join(lines)


def convergence_report(stats: Sequence[AggregateStats],
                       slack: float = 1.25) -> ConvergenceReport:
    """Per-N deviation table plus a mean-square convergence check.

    The std comparison across the two largest N values carries a slack
    factor since it is a statistical quantity at finite trial counts.
    """
    if len(stats) < 2:
        raise ValueError("convergence report needs stats for at least two N values")
    ordered = sorted(stats, key=lambda s: s.n_rx)
    rows = tuple(
        ConvergenceRow(
            n_rx=s.n_rx, mean=s.mean, std=s.std,
            rel_dev_mean=s.rel_dev_mean, rel_dev_max=s.rel_dev_max,
            within_15pct=s.rel_dev_mean < 0.15, within_10pct=s.rel_dev_mean < 0.10,
        )
        for s in ordered
    )
    std_ok = ordered[-1].std <= slack * ordered[-2].std
    return ConvergenceReport(rows=rows, std_non_increasing=bool(std_ok))
