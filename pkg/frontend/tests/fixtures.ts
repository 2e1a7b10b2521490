import { GAIN_COLUMNS, STATS_COLUMNS, TRIALS_COLUMNS } from "../src/schema.js";

export function trialsCsv(
  rows: Array<{ N: number; M: number; cap: number; trial: number; normalized?: number }>,
  experiment = "const-equal",
): string {
  const body = rows.map((r) =>
    [
      experiment, r.N, r.N, r.M, r.N, r.trial, 12345,
      r.cap, r.cap + 0.1, r.cap - 0.1, r.normalized ?? 0,
    ].join(","),
  );
  return [TRIALS_COLUMNS.join(","), ...body].join("\n") + "\n";
}

export function statsCsv(
  rows: Array<{ N: number; M: number; mean: number; std: number; asymptote: number }>,
  experiment = "const-equal",
): string {
  const body = rows.map((r) =>
    [
      experiment, r.N, r.N, r.M, r.N, 50, r.mean, r.std, r.asymptote,
      Math.abs(r.mean - r.asymptote) / r.asymptote, 0.2,
    ].join(","),
  );
  return [STATS_COLUMNS.join(","), ...body].join("\n") + "\n";
}

export function gainCsv(
  rows: Array<{ A: number; N: number; M: number; ratio: number }>,
): string {
  const body = rows.map((r) =>
    [r.A, r.N, r.N, r.M, 4, 2 * r.ratio, 2, r.ratio].join(","),
  );
  return [GAIN_COLUMNS.join(","), ...body].join("\n") + "\n";
}

export function convergenceFixture() {
  const trials: Array<{ N: number; M: number; cap: number; trial: number }> = [];
  for (const n of [8, 16, 32]) {
    for (const m of [1, 2]) {
      for (let t = 0; t < 120; t++) {
        trials.push({ N: n, M: m, cap: m * (3 + n / 16) + 0.01 * (t % 7), trial: t });
      }
    }
  }
  const stats = [8, 16, 32].flatMap((n) =>
    [1, 2].map((m) => ({
      N: n, M: m, mean: m * (3 + n / 16) + 0.03, std: 0.5 / n,
      asymptote: m * (3 + n / 16),
    })),
  );
  return { trialsText: trialsCsv(trials), statsText: statsCsv(stats) };
}
