#!/usr/bin/env node
import { readFileSync, writeFileSync } from "node:fs";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { FIGURES, figureSpec } from "./figures.js";
import { renderConvergence, renderRatio } from "./render.js";
import { parseCatalog, parseGain, parseStats, parseTrials, SchemaError } from "./schema.js";

export interface RenderArgs {
  figure: string;
  trials?: string;
  stats?: string;
  gain?: string;
  out: string;
  seed: number;
}

export function renderCommand(args: RenderArgs): string {
  const spec = figureSpec(args.figure);
  let svg: string;
  if (spec.kind === "ratio") {
    if (!args.gain) throw new SchemaError(`figure ${args.figure} needs --gain`);
    svg = renderRatio(args.figure, parseGain(readFileSync(args.gain, "utf8")), {
      seed: args.seed,
    });
  } else {
    if (!args.trials || !args.stats) {
      throw new SchemaError(`figure ${args.figure} needs --trials and --stats`);
    }
    svg = renderConvergence(
      args.figure,
      {
        trials: parseTrials(readFileSync(args.trials, "utf8")),
        stats: parseStats(readFileSync(args.stats, "utf8")),
      },
      { seed: args.seed },
    );
  }
  writeFileSync(args.out, svg);
  return args.out;
}

export function listText(catalogPath?: string): string {
  const lines: string[] = [];
  const catalog = catalogPath
    ? parseCatalog(readFileSync(catalogPath, "utf8"))
    : undefined;
  for (const spec of Object.values(FIGURES)) {
    lines.push(`${spec.id}: ${spec.title}`);
    lines.push(`    ${spec.note}`);
  }
  if (catalog) {
    lines.push("");
    lines.push("experiment catalog:");
    for (const entry of catalog) {
      lines.push(`  ${entry.experiment} -> ${entry.figures}`);
    }
  }
  return lines.join("\n");
}

export async function main(argv: string[]): Promise<number> {
  try {
    await yargs(argv)
      .scriptName("speclim-figures")
      .command(
        "render",
        "render one figure from speclim CSV outputs",
        (y) =>
          y
            .option("figure", { type: "string", demandOption: true })
            .option("trials", { type: "string" })
            .option("stats", { type: "string" })
            .option("gain", { type: "string" })
            .option("out", { type: "string", demandOption: true })
            .option("seed", { type: "number", default: 7 }),
        (args) => {
          const path = renderCommand(args as unknown as RenderArgs);
          console.log(`wrote ${path}`);
        },
      )
      .command(
        "list",
        "list figure ids (optionally cross-referencing a catalog JSON)",
        (y) => y.option("catalog", { type: "string" }),
        (args) => {
          console.log(listText(args.catalog as string | undefined));
        },
      )
      .demandCommand(1)
      .strict()
      .fail((msg, err) => {
        throw err ?? new Error(msg);
      })
      .parseAsync();
    return 0;
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`schema error: ${err.message}`);
      return 2;
    }
    console.error(String(err instanceof Error ? err.message : err));
    return 1;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${process.argv[1]}`).href;
if (invokedDirectly) {
  main(hideBin(process.argv)).then((code) => {
    process.exitCode = code;
  });
}
