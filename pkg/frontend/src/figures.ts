import type { StatsRow, TrialRow } from "./schema.js";

/** Which CSVs a figure consumes and how its series are grouped. */
export interface FigureSpec {
  id: string;
  kind: "convergence" | "ratio";
  title: string;
  yLabel: string;
  /** stream-count filter applied to trials and stats (convergence figures) */
  match?: (row: { M: number }) => boolean;
  /** expected normalization flag of the trial rows, when it matters */
  wantNormalized?: boolean;
  note: string;
}

export const FIGURES: Record<string, FigureSpec> = {
  fig2: {
    id: "fig2", kind: "convergence",
    title: "Constant path loss, equal powers (n/N = 1)",
    yLabel: "spectral efficiency (bits/s/Hz)",
    wantNormalized: false,
    note: "feed the const-equal run with n_ratio=1",
  },
  fig3: {
    id: "fig3", kind: "convergence",
    title: "Constant path loss, equal powers (n/N = 4)",
    yLabel: "spectral efficiency (bits/s/Hz)",
    wantNormalized: false,
    note: "feed the const-equal run with n_ratio=4",
  },
  fig4: {
    id: "fig4", kind: "convergence",
    title: "Constant path loss, two-class powers",
    yLabel: "spectral efficiency (bits/s/Hz)",
    wantNormalized: false,
    note: "feed the const-two-class run",
  },
  fig5: {
    id: "fig5", kind: "convergence",
    title: "Spatial network, equal powers, one stream (normalized)",
    yLabel: "normalized spectral efficiency (bits/s/Hz)",
    match: (row) => row.M === 1,
    wantNormalized: true,
    note: "feed the spatial-equal run with normalized=true",
  },
  fig6: {
    id: "fig6", kind: "convergence",
    title: "Spatial network, equal powers, four streams (normalized)",
    yLabel: "normalized spectral efficiency (bits/s/Hz)",
    match: (row) => row.M === 4,
    wantNormalized: true,
    note: "feed the spatial-equal run with normalized=true",
  },
  fig7: {
    id: "fig7", kind: "convergence",
    title: "Spatial network, two-class powers (normalized)",
    yLabel: "normalized spectral efficiency (bits/s/Hz)",
    wantNormalized: true,
    note: "feed the spatial-two-class run with normalized=true",
  },
  fig8: {
    id: "fig8", kind: "convergence",
    title: "Spatial network, equal powers: mean spectral efficiency",
    yLabel: "spectral efficiency (bits/s/Hz)",
    wantNormalized: false,
    note: "feed the spatial-equal run (alpha=4)",
  },
  fig9: {
    id: "fig9", kind: "convergence",
    title: "Spatial network, two-class powers: mean spectral efficiency",
    yLabel: "spectral efficiency (bits/s/Hz)",
    wantNormalized: false,
    note: "feed the spatial-two-class run (alpha=4)",
  },
  fig10: {
    id: "fig10", kind: "convergence",
    title: "Spatial network, equal powers: mean spectral efficiency (alpha = 3)",
    yLabel: "spectral efficiency (bits/s/Hz)",
    wantNormalized: false,
    note: "feed the spatial-equal run with alpha=3",
  },
  fig11: {
    id: "fig11", kind: "ratio",
    title: "Mean spectral efficiency with Tx-Link CSI over no Tx CSI",
    yLabel: "ratio (%)",
    note: "feed the csi-gain run",
  },
};

export function figureSpec(id: string): FigureSpec {
  const spec = FIGURES[id];
  if (!spec) {
    throw new Error(
      `unknown figure '${id}'; known ids: ${Object.keys(FIGURES).join(", ")}`,
    );
  }
  return spec;
}

export function matchStats<T extends { M: number }>(spec: FigureSpec, rows: T[]): T[] {
  return spec.match ? rows.filter(spec.match) : rows;
}

export function matchTrials<T extends { M: number; normalized: number }>(
  spec: FigureSpec,
  rows: T[],
): T[] {
  let out = spec.match ? rows.filter(spec.match) : rows;
  if (spec.wantNormalized !== undefined) {
    out = out.filter((r) => (r.normalized === 1) === spec.wantNormalized);
  }
  return out;
}

export type ConvergenceInput = { trials: TrialRow[]; stats: StatsRow[] };
