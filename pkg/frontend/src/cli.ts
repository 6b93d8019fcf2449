import { writeFileSync } from "node:fs";
import { parseArgs } from "node:util";

import { EXIT_IO, EXIT_OK, EXIT_SCHEMA, EXIT_USAGE, IoError, SchemaError } from "./errors.js";
import { render } from "./figure.js";
import { findRecipe, RECIPES } from "./recipes.js";

const USAGE = `usage: plot <figure-id> --runs <dir> [--runs <dir> ...] --out <file>
figures: ${RECIPES.map((r) => r.id).join(", ")}`;

/**
 * Entry point, returns the process exit code: 0 success, 1 usage,
 * 2 schema mismatch, 3 I/O failure.
 */
export function main(argv: string[]): number {
  let values: { runs?: string[]; out?: string };
  let positionals: string[];
  try {
    ({ values, positionals } = parseArgs({
      args: argv,
      options: {
        runs: { type: "string", multiple: true },
        out: { type: "string" },
      },
      allowPositionals: true,
    }));
  } catch (err) {
    console.error(`${(err as Error).message}\n${USAGE}`);
    return EXIT_USAGE;
  }
  if (positionals.length !== 1 || !values.out || !values.runs || values.runs.length === 0) {
    console.error(USAGE);
    return EXIT_USAGE;
  }
  const recipe = findRecipe(positionals[0]);
  if (!recipe) {
    console.error(`unknown figure "${positionals[0]}"\n${USAGE}`);
    return EXIT_USAGE;
  }
  try {
    const svg = render(recipe, values.runs);
    try {
      writeFileSync(values.out, svg);
    } catch (err) {
      const code = (err as NodeJS.ErrnoException).code ?? "unknown";
      throw new IoError(`cannot write ${values.out} (${code})`);
    }
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`schema error: ${err.message}`);
      return EXIT_SCHEMA;
    }
    if (err instanceof IoError) {
      console.error(`i/o error: ${err.message}`);
      return EXIT_IO;
    }
    throw err;
  }
  return EXIT_OK;
}
