import { figureSpec, matchStats, matchTrials, type ConvergenceInput } from "./figures.js";
import { sampleWithoutReplacement, splitmix32 } from "./rng.js";
import { SchemaError, type GainRow } from "./schema.js";
import { Chart, extent, PALETTE } from "./svg.js";

export interface RenderOptions {
  seed?: number;
  width?: number;
  height?: number;
  maxPointsPerN?: number;
}

const DEFAULTS = { seed: 7, width: 720, height: 480, maxPointsPerN: 100 };

function groupBy<T>(rows: T[], key: (row: T) => string | number): Map<string | number, T[]> {
  const out = new Map<string | number, T[]>();
  for (const row of rows) {
    const k = key(row);
    const bucket = out.get(k);
    if (bucket) bucket.push(row);
    else out.set(k, [row]);
  }
  return out;
}

/**
 * Scatter of trial samples vs N with the asymptote (solid) and the
 * mean +/- std envelope (dashed) per stream count, mirroring the
 * convergence figures. At most maxPointsPerN trials are drawn per (M, N),
 * chosen by a seeded shuffle; the seed is recorded in the SVG metadata.
 */
export function renderConvergence(
  figureId: string,
  input: ConvergenceInput,
  options: RenderOptions = {},
): string {
  const spec = figureSpec(figureId);
  if (spec.kind !== "convergence") {
    throw new SchemaError(`figure ${figureId} is not a convergence figure`);
  }
  const opts = { ...DEFAULTS, ...options };
  const trials = matchTrials(spec, input.trials);
  const stats = matchStats(spec, input.stats);
  if (trials.length === 0 || stats.length === 0) {
    throw new SchemaError(
      `figure ${figureId}: no rows match its series filter (${spec.note})`,
    );
  }

  const rand = splitmix32(opts.seed);
  const shown = new Map<number, { n: number; cap: number }[]>();
  for (const [m, byM] of groupBy(trials, (r) => r.M)) {
    const points: { n: number; cap: number }[] = [];
    for (const [, byN] of groupBy(byM, (r) => r.N)) {
      for (const row of sampleWithoutReplacement(byN, opts.maxPointsPerN, rand)) {
        points.push({ n: row.N, cap: row.cap_exact });
      }
    }
    shown.set(m as number, points);
  }

  const yValues: number[] = [];
  for (const points of shown.values()) for (const p of points) yValues.push(p.cap);
  for (const s of stats) {
    yValues.push(s.asymptote, s.mean + (Number.isNaN(s.std) ? 0 : s.std));
  }
  const [xLo, xHi] = extent(stats.map((s) => s.N));
  const [yLo, yHi] = extent(yValues);
  const pad = 0.06 * (yHi - yLo || 1);

  const chart = new Chart(
    {
      width: opts.width, height: opts.height,
      title: spec.title, xLabel: "receive antennas N", yLabel: spec.yLabel,
      metadata: { figure: figureId, "subsample-seed": opts.seed,
                  "max-points-per-N": opts.maxPointsPerN },
    },
    [Math.max(0, xLo - 1), xHi + 1],
    [Math.max(0, yLo - pad), yHi + pad],
  );

  const mValues = [...shown.keys()].sort((a, b) => a - b);
  mValues.forEach((m, idx) => {
    const color = PALETTE[idx % PALETTE.length];
    chart.dots(shown.get(m)!.map((p) => [p.n, p.cap]), color);
    const series = stats
      .filter((s) => s.M === m)
      .sort((a, b) => a.N - b.N);
    chart.line(series.map((s) => [s.N, s.asymptote]), color, false, 2.2);
    const withStd = series.filter((s) => !Number.isNaN(s.std));
    chart.line(withStd.map((s) => [s.N, s.mean + s.std]), color, true, 1.2);
    chart.line(withStd.map((s) => [s.N, s.mean - s.std]), color, true, 1.2);
    chart.addLegend(`M = ${m}`, color);
  });

  return chart.render();
}

/** CSI-gain ratio (in percent) vs link rank A, one curve per (N, M). */
export function renderRatio(
  figureId: string,
  rows: GainRow[],
  options: RenderOptions = {},
): string {
  const spec = figureSpec(figureId);
  if (spec.kind !== "ratio") {
    throw new SchemaError(`figure ${figureId} is not a ratio figure`);
  }
  if (rows.length === 0) throw new SchemaError(`figure ${figureId}: no rows`);
  const opts = { ...DEFAULTS, ...options };

  const [xLo, xHi] = extent(rows.map((r) => r.A));
  const [yLo, yHi] = extent(rows.map((r) => 100 * r.ratio));
  const pad = 0.06 * (yHi - yLo || 1);
  const chart = new Chart(
    {
      width: opts.width, height: opts.height,
      title: spec.title, xLabel: "link rank A", yLabel: spec.yLabel,
      metadata: { figure: figureId },
    },
    [0, xHi + 0.5],
    [Math.min(100, yLo - pad), yHi + pad],
  );

  const groups = [...groupBy(rows, (r) => `N=${r.N}, M=${r.M}`).entries()]
    .sort(([a], [b]) => String(a).localeCompare(String(b), undefined, { numeric: true }));
  groups.forEach(([label, series], idx) => {
    const color = PALETTE[idx % PALETTE.length];
    const pts = series
      .slice()
      .sort((a, b) => a.A - b.A)
      .map((r): [number, number] => [r.A, 100 * r.ratio]);
    // every receiver count beyond the first renders dashed, matching the
    // solid-vs-dashed N distinction of the source figure
    const nValues = [...new Set(rows.map((r) => r.N))].sort((a, b) => b - a);
    const dashed = series[0] !== undefined && series[0].N !== nValues[0];
    chart.line(pts, color, dashed);
    chart.addLegend(String(label), color, dashed);
  });
  return chart.render();
}
