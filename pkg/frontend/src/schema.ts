import Papa from "papaparse";
import { z } from "zod";

/** Raised when a CSV does not match the expected speclim schema. */
export class SchemaError extends Error {}

export const TRIALS_COLUMNS = [
  "experiment", "N", "K", "M", "n", "trial", "seed",
  "cap_exact", "cap_upper", "cap_lower", "normalized",
] as const;

export const STATS_COLUMNS = [
  "experiment", "N", "K", "M", "n", "trials",
  "mean", "std", "asymptote", "rel_dev_mean", "rel_dev_max",
] as const;

export const GAIN_COLUMNS = [
  "A", "N", "K", "M", "alpha", "cap_csi", "cap_nocsi", "ratio",
] as const;

const num = z.coerce.number();
const int = z.coerce.number().int();
// single-trial aggregates carry std / deviations of "nan" by contract
const numOrNan = z.preprocess((v) => Number(v), z.union([z.number(), z.nan()]));

const trialRow = z.object({
  experiment: z.string(),
  N: int, K: int, M: int, n: int, trial: int,
  cap_exact: num, cap_upper: num, cap_lower: num,
  normalized: int,
});

const statsRow = z.object({
  experiment: z.string(),
  N: int, K: int, M: int, n: int, trials: int,
  mean: num, std: numOrNan, asymptote: num,
  rel_dev_mean: numOrNan, rel_dev_max: numOrNan,
});

const gainRow = z.object({
  A: num, N: int, K: int, M: int, alpha: num,
  cap_csi: num, cap_nocsi: num, ratio: num,
});

export type TrialRow = z.infer<typeof trialRow>;
export type StatsRow = z.infer<typeof statsRow>;
export type GainRow = z.infer<typeof gainRow>;

function parseCsv<T>(
  text: string,
  columns: readonly string[],
  rowSchema: z.ZodType<T>,
  label: string,
): T[] {
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  const fields = parsed.meta.fields ?? [];
  for (const column of columns) {
    if (!fields.includes(column)) {
      throw new SchemaError(`${label}: missing column '${column}'`);
    }
  }
  if (parsed.data.length === 0) {
    throw new SchemaError(`${label}: no data rows`);
  }
  return parsed.data.map((raw, i) => {
    const result = rowSchema.safeParse(raw);
    if (!result.success) {
      const issue = result.error.issues[0];
      throw new SchemaError(
        `${label} row ${i + 1}: ${issue.path.join(".")} ${issue.message}`,
      );
    }
    return result.data;
  });
}

export const parseTrials = (text: string): TrialRow[] =>
  parseCsv(text, TRIALS_COLUMNS, trialRow, "trials CSV");

export const parseStats = (text: string): StatsRow[] =>
  parseCsv(text, STATS_COLUMNS, statsRow, "stats CSV");

export const parseGain = (text: string): GainRow[] =>
  parseCsv(text, GAIN_COLUMNS, gainRow, "gain CSV");

/** Machine-readable experiment catalog emitted by `speclim list --json`. */
const catalogEntry = z.object({
  experiment: z.string(),
  figures: z.string(),
  description: z.string(),
});

export const parseCatalog = (text: string) => {
  const parsed = z.object({ experiments: z.array(catalogEntry) }).safeParse(
    JSON.parse(text),
  );
  if (!parsed.success) {
    throw new SchemaError(`catalog JSON: ${parsed.error.issues[0]?.message}`);
  }
  return parsed.data.experiments;
};
