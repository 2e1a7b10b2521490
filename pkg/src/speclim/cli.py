"""Command-line front end: experiment catalog, config parsing, CSV emission.

Configs are flat key=value text with `a,b,c` lists and `lo..hi[:step]`
ranges; decibel keys (`gamma_db=-125`) are converted to linear ratios once
at parse time and everything downstream works in linear units. Each run
writes a trials CSV, a stats CSV (or the csi-gain table) and a JSON
manifest whose config echo parses back to the identical resolved config.
"""

from __future__ import annotations

import argparse
import datetime
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError, NumericalError
from .montecarlo import (
    EXPERIMENTS,
    AggregateStats,
    CsiGainRow,
    ExperimentConfig,
    PowerSpec,
    TrialRecord,
    run_csi_gain,
    run_experiment,
)

try:  # version echoed into manifests
    from importlib.metadata import version as _pkg_version
    VERSION = _pkg_version("speclim")
except Exception:  # pragma: no cover
    VERSION = "0.1.0"

OUT_DIR_ENV = "SPECLIM_OUT_DIR"

TRIALS_HEADER = "experiment,N,K,M,n,trial,seed,cap_exact,cap_upper,cap_lower,normalized"
STATS_HEADER = "experiment,N,K,M,n,trials,mean,std,asymptote,rel_dev_mean,rel_dev_max"
CSI_HEADER = "A,N,K,M,alpha,cap_csi,cap_nocsi,ratio"


@dataclass(frozen=True)
class CatalogEntry:
    experiment: str
    figures: str
    description: str
    defaults: dict
    paper_scale: dict


CATALOG = {
    "const-equal": CatalogEntry(
        "const-equal", "Figures 2–3",
        "constant path loss, equal per-stream powers P = 1/M",
        defaults=dict(N="8,16,24,32", M="1,2,4,8", n_ratio="1", trials="200",
                      seed="1", gamma_db="-125", gamma1_db="-100",
                      sigma_bar2="1e-13", p_total="1"),
        paper_scale=dict(trials="1000", N="8,12,16,20,24,28,32,36,40"),
    ),
    "const-two-class": CatalogEntry(
        "const-two-class", "Figure 4",
        "constant path loss, two-class powers (P1=0.5 all streams w.p. q, else P2=1 single stream)",
        defaults=dict(N="8,16,24,32", M="1,2,4,8", n_fixed="128", trials="200",
                      seed="1", gamma_db="-125", gamma1_db="-100",
                      sigma_bar2="1e-13", p1="0.5", p2="1", q="0.5"),
        paper_scale=dict(trials="1000", N="8,12,16,20,24,28,32,36,40"),
    ),
    "spatial-equal": CatalogEntry(
        "spatial-equal", "Figures 5–6, 8, 10",
        "uniform disk of interferers, equal powers; normalized=true for the scaled-SINR figures",
        defaults=dict(N="8,16,24,32", M="1,2,4,8", n_fixed="500", trials="200",
                      seed="1", alpha="4", rho="1e-3", link_rank="1", g_t="1",
                      sigma2="1e-13", normalized="false", p_total="1"),
        paper_scale=dict(trials="1000", n_fixed="1000"),
    ),
    "spatial-two-class": CatalogEntry(
        "spatial-two-class", "Figures 7, 9",
        "uniform disk of interferers, two-class powers",
        defaults=dict(N="8,16,24,32", M="1,2,4,8", n_fixed="500", trials="200",
                      seed="1", alpha="4", rho="1e-3", link_rank="1", g_t="1",
                      sigma2="1e-13", normalized="false", p1="0.5", p2="1", q="0.5"),
        paper_scale=dict(trials="1000", n_fixed="1000"),
    ),
    "csi-gain": CatalogEntry(
        "csi-gain", "Figure 11",
        "analytic ratio of mean spectral efficiency with/without Tx-Link CSI vs link rank A",
        defaults=dict(N="8,12", M="1,2,4,8", A="0.5..16:0.5", alpha="4",
                      trials="1", seed="1"),
        paper_scale=dict(),
    ),
}

# key -> parser kind
_KEY_KINDS = {
    "experiment": "str",
    "N": "int_list",
    "K": "k_rule",
    "M": "int_list",
    "A": "float_list",
    "n_ratio": "float",
    "n_fixed": "int",
    "trials": "int",
    "seed": "int",
    "normalized": "bool",
    "paper_scale": "bool",
    "gamma": "float",
    "gamma_db": "float",
    "gamma1": "float",
    "gamma1_db": "float",
    "sigma_bar2": "float",
    "sigma2": "float",
    "alpha": "float",
    "rho": "float",
    "link_rank": "float",
    "g_t": "float",
    "p_total": "float",
    "p1": "float",
    "p2": "float",
    "q": "float",
}


def _parse_scalar(token: str) -> float:
    try:
        return float(token)
    except ValueError as exc:
        raise ConfigError(f"expected a number, got {token!r}") from exc


def _expand_range(value: str) -> list[float]:
    body, step = value, None
    if ":" in value:
        body, step_s = value.rsplit(":", 1)
        step = _parse_scalar(step_s)
    lo_s, hi_s = body.split("..", 1)
    lo, hi = _parse_scalar(lo_s), _parse_scalar(hi_s)
    if step is None:
        step = 1.0
    if step <= 0 or hi < lo:
        raise ConfigError(f"bad range {value!r}: need lo <= hi and step > 0")
    out = []
    k = 0
    while True:
        x = lo + k * step
        if x > hi + 1e-9 * max(1.0, abs(hi)):
            break
        out.append(x)
        k += 1
    return out


def _parse_numbers(value: str) -> list[float]:
    if ".." in value:
        return _expand_range(value)
    return [_parse_scalar(tok) for tok in value.split(",") if tok != ""]


def _parse_value(key: str, value: str):
    kind = _KEY_KINDS.get(key)
    if kind is None:
        raise ConfigError(f"unknown key {key!r}")
    value = value.strip()
    if kind == "str":
        return value
    if kind == "bool":
        low = value.lower()
        if low in ("true", "1", "yes"):
            return True
        if low in ("false", "0", "no"):
            return False
        raise ConfigError(f"key {key}: expected true/false, got {value!r}")
    if kind == "int":
        nums = _parse_numbers(value)
        if len(nums) != 1 or nums[0] != int(nums[0]):
            raise ConfigError(f"key {key}: expected a single integer, got {value!r}")
        return int(nums[0])
    if kind == "float":
        nums = _parse_numbers(value)
        if len(nums) != 1:
            raise ConfigError(f"key {key}: expected a single number, got {value!r}")
        return nums[0]
    if kind == "int_list":
        nums = _parse_numbers(value)
        if not nums or any(x != int(x) for x in nums):
            raise ConfigError(f"key {key}: expected integers, got {value!r}")
        return tuple(int(x) for x in nums)
    if kind == "float_list":
        nums = _parse_numbers(value)
        if not nums:
            raise ConfigError(f"key {key}: expected numbers, got {value!r}")
        return tuple(nums)
    if kind == "k_rule":
        if value == "equal":
            return None
        nums = _parse_numbers(value)
        if len(nums) != 1 or nums[0] != int(nums[0]):
            raise ConfigError(f"key K: expected 'equal' or an integer, got {value!r}")
        return int(nums[0])
    raise AssertionError(kind)


def _read_config_text(text: str) -> dict[str, str]:
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"expected key=value, got {line!r}", line=lineno)
        key, value = line.split("=", 1)
        key = key.strip()
        if key not in _KEY_KINDS:
            raise ConfigError(f"unknown key {key!r}", line=lineno)
        try:
            _parse_value(key, value)
        except ConfigError as exc:
            raise ConfigError(str(exc), line=lineno) from exc
        entries[key] = value.strip()
    return entries


def parse_config(path: str | os.PathLike | None = None, *, text: str | None = None,
                 overrides: dict[str, str] | None = None) -> ExperimentConfig:
    """Resolve catalog defaults, config file and overrides into a config.

    Precedence: catalog defaults < paper-scale adjustments < file entries <
    overrides. Unknown keys and malformed values raise ConfigError with the
    offending line or field named.
    """
    entries: dict[str, str] = {}
    if path is not None:
        entries.update(_read_config_text(Path(path).read_text()))
    if text is not None:
        entries.update(_read_config_text(text))
    if overrides:
        for key, value in overrides.items():
            if key not in _KEY_KINDS:
                raise ConfigError(f"unknown key {key!r}")
            entries[key] = str(value)

    experiment = entries.get("experiment")
    if experiment is None:
        raise ConfigError("missing key 'experiment'")
    if experiment not in CATALOG:
        raise ConfigError(
            f"invalid experiment {experiment!r}; valid ids: {', '.join(EXPERIMENTS)}"
        )
    entry = CATALOG[experiment]

    resolved = dict(entry.defaults)
    if _parse_value("paper_scale", entries.get("paper_scale", "false")):
        resolved.update(entry.paper_scale)
    resolved.update(entries)
    resolved.pop("paper_scale", None)

    # n_ratio and n_fixed are mutually exclusive; an explicit one in the
    # user's entries displaces the catalog's choice.
    if "n_ratio" in entries and "n_fixed" not in entries:
        resolved.pop("n_fixed", None)
    if "n_fixed" in entries and "n_ratio" not in entries:
        resolved.pop("n_ratio", None)

    values = {k: _parse_value(k, v) for k, v in resolved.items()}

    # dB inputs are converted once; linear keys win if both are present.
    for db_key, lin_key in (("gamma_db", "gamma"), ("gamma1_db", "gamma1")):
        if db_key in values:
            db = values.pop(db_key)
            values.setdefault(lin_key, 10.0 ** (db / 10.0))

    power_variant = "two-class" if "two-class" in experiment else "equal-power"
    power = PowerSpec(
        variant=power_variant,
        p_total=values.get("p_total", 1.0),
        p1=values.get("p1", 0.5),
        p2=values.get("p2", 1.0),
        q=values.get("q", 0.5),
    )
    try:
        return ExperimentConfig(
            experiment=experiment,
            n_rx_list=values["N"],
            m_list=values["M"],
            trials=values["trials"],
            root_seed=values["seed"],
            power=power,
            k_fixed=values.get("K"),
            n_ratio=values.get("n_ratio"),
            n_fixed=values.get("n_fixed"),
            normalized=values.get("normalized", False),
            gamma=values.get("gamma"),
            gamma1=values.get("gamma1"),
            sigma_bar2=values.get("sigma_bar2"),
            g_t=values.get("g_t"),
            alpha=values.get("alpha"),
            rho=values.get("rho"),
            link_rank=values.get("link_rank"),
            sigma2=values.get("sigma2"),
            a_grid=values.get("A", ()),
        )
    except (ValueError, KeyError) as exc:
        raise ConfigError(str(exc)) from exc


def config_echo(config: ExperimentConfig) -> str:
    """Flat key=value text that parses back to the identical config."""
    lines = [f"experiment={config.experiment}"]
    lines.append("N=" + ",".join(str(n) for n in config.n_rx_list))
    if config.k_fixed is not None:
        lines.append(f"K={config.k_fixed}")
    lines.append("M=" + ",".join(str(m) for m in config.m_list))
    if config.n_ratio is not None:
        lines.append(f"n_ratio={config.n_ratio!r}")
    if config.n_fixed is not None:
        lines.append(f"n_fixed={config.n_fixed}")
    lines.append(f"trials={config.trials}")
    lines.append(f"seed={config.root_seed}")
    if config.experiment == "csi-gain":
        lines.append("A=" + ",".join(repr(a) for a in config.a_grid))
    if config.normalized:
        lines.append("normalized=true")
    p = config.power
    if p.variant == "equal-power":
        lines.append(f"p_total={p.p_total!r}")
    else:
        lines.append(f"p1={p.p1!r}")
        lines.append(f"p2={p.p2!r}")
        lines.append(f"q={p.q!r}")
    for key in ("gamma", "gamma1", "sigma_bar2", "g_t", "alpha", "rho",
                "link_rank", "sigma2"):
        val = getattr(config, key)
        if val is not None:
            lines.append(f"{key}={val!r}")
    return "\n".join(lines) + "\n"


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, int):
        return str(x)
    return f"{x:.17g}"


def _trials_csv(records: list[TrialRecord]) -> str:
    rows = [TRIALS_HEADER]
    for r in records:
        rows.append(",".join([
            r.experiment, _fmt(r.n_rx), _fmt(r.k_tx), _fmt(r.m),
            _fmt(r.n_interferers), _fmt(r.trial), _fmt(r.seed),
            _fmt(r.cap_exact), _fmt(r.cap_upper), _fmt(r.cap_lower),
            _fmt(r.normalized),
        ]))
    return "\n".join(rows) + "\n"


def _stats_csv(stats: list[AggregateStats]) -> str:
    rows = [STATS_HEADER]
    for s in stats:
        rows.append(",".join([
            s.experiment, _fmt(s.n_rx), _fmt(s.k_tx), _fmt(s.m),
            _fmt(s.n_interferers), _fmt(s.trials), _fmt(s.mean), _fmt(s.std),
            _fmt(s.asymptote), _fmt(s.rel_dev_mean), _fmt(s.rel_dev_max),
        ]))
    return "\n".join(rows) + "\n"


def _csi_csv(rows_in: list[CsiGainRow]) -> str:
    rows = [CSI_HEADER]
    for r in rows_in:
        rows.append(",".join([
            _fmt(r.a), _fmt(r.n_rx), _fmt(r.k_tx), _fmt(r.m), _fmt(r.alpha),
            _fmt(r.cap_csi), _fmt(r.cap_nocsi), _fmt(r.ratio),
        ]))
    return "\n".join(rows) + "\n"


def run(config: ExperimentConfig, out_dir: str | os.PathLike) -> dict:
    """Execute the experiment and write CSVs plus a manifest; returns the manifest."""
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IOError(f"cannot create output directory {out}: {exc}") from exc
    started = datetime.datetime.now(datetime.timezone.utc).isoformat()
    outputs = {}
    if config.experiment == "csi-gain":
        rows = run_csi_gain(config)
        gain_path = out / f"{config.experiment}_gain.csv"
        gain_path.write_text(_csi_csv(rows))
        outputs["gain"] = str(gain_path)
    else:
        stats, records = run_experiment(config)
        trials_path = out / f"{config.experiment}_trials.csv"
        stats_path = out / f"{config.experiment}_stats.csv"
        trials_path.write_text(_trials_csv(records))
        stats_path.write_text(_stats_csv(stats))
        outputs["trials"] = str(trials_path)
        outputs["stats"] = str(stats_path)
    finished = datetime.datetime.now(datetime.timezone.utc).isoformat()
    manifest = {
        "tool": "speclim",
        "version": VERSION,
        "experiment": config.experiment,
        "root_seed": config.root_seed,
        "started": started,
        "finished": finished,
        "outputs": outputs,
        "config": config_echo(config),
    }
    manifest_path = out / f"{config.experiment}_manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2) + "\n")
    manifest["manifest_path"] = str(manifest_path)
    return manifest


def list_experiments(machine: bool = False) -> str:
    """Catalog text: one line per experiment with its figure mapping."""
    if machine:
        payload = [
            {
                "experiment": e.experiment,
                "figures": e.figures,
                "description": e.description,
                "defaults": e.defaults,
                "paper_scale": e.paper_scale,
            }
            for e in CATALOG.values()
        ]
        return json.dumps({"experiments": payload}, indent=2, ensure_ascii=False)
    lines = []
    for e in CATALOG.values():
        lines.append(f"{e.experiment} → {e.figures}")
        lines.append(f"    {e.description}")
        defaults = " ".join(f"{k}={v}" for k, v in e.defaults.items())
        lines.append(f"    defaults: {defaults}")
        if e.paper_scale:
            scale = " ".join(f"{k}={v}" for k, v in e.paper_scale.items())
            lines.append(f"    --paper-scale: {scale}")
    return "\n".join(lines)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="speclim",
        description="Spectral-efficiency experiments for multi-antenna ad-hoc links",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    runp = sub.add_parser("run", help="run an experiment and write CSV outputs")
    runp.add_argument("--experiment", help="experiment id (see `speclim list`)")
    runp.add_argument("--config", help="flat key=value config file")
    runp.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                      help="override a config key (repeatable)")
    for flag, key in (("--N", "N"), ("--K", "K"), ("--M", "M"), ("--A", "A"),
                      ("--trials", "trials"), ("--seed", "seed"),
                      ("--n-ratio", "n_ratio"), ("--n-fixed", "n_fixed"),
                      ("--alpha", "alpha"), ("--rho", "rho"),
                      ("--link-rank", "link_rank"),
                      ("--normalized", "normalized")):
        runp.add_argument(flag, dest=f"key_{key}", metavar="VALUE")
    runp.add_argument("--paper-scale", action="store_true",
                      help="restore full-scale trial counts and interferer numbers")
    runp.add_argument("--out-dir", default=None,
                      help=f"output directory (default ${OUT_DIR_ENV} or ./results)")

    listp = sub.add_parser("list", help="print the experiment catalog")
    listp.add_argument("--json", action="store_true",
                       help="machine-readable catalog")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "list":
        print(list_experiments(machine=args.json))
        return 0

    overrides: dict[str, str] = {}
    if args.experiment:
        overrides["experiment"] = args.experiment
    for item in args.set:
        if "=" not in item:
            print(f"error: --set expects KEY=VALUE, got {item!r}", file=sys.stderr)
            return 2
        key, value = item.split("=", 1)
        overrides[key.strip()] = value.strip()
    for key in _KEY_KINDS:
        val = getattr(args, f"key_{key}", None)
        if val is not None:
            overrides[key] = val
    if args.paper_scale:
        overrides["paper_scale"] = "true"

    out_dir = args.out_dir or os.environ.get(OUT_DIR_ENV, "results")
    try:
        config = parse_config(args.config, overrides=overrides)
        manifest = run(config, out_dir)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 1
    for kind, path in manifest["outputs"].items():
        print(f"{kind}: {path}")
    print(f"manifest: {manifest['manifest_path']}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
