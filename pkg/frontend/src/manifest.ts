import { readFileSync } from "node:fs";
import { join } from "node:path";

import { IoError, SchemaError } from "./errors.js";

export interface RunInfo {
  dir: string;
  family: string;
  nSites: number;
  lam: number;
  r: number;
  g: number;
  subsystems: string[];
  negativityKs: number[];
  seriesDeltas: number[];
  trackEe: boolean;
}

/** Read and validate a run directory's manifest.json. */
export function readRunInfo(dir: string): RunInfo {
  const path = join(dir, "manifest.json");
  let text: string;
  try {
    text = readFileSync(path, "utf8");
  } catch (err) {
    const code = (err as NodeJS.ErrnoException).code ?? "unknown";
    throw new IoError(`cannot read ${path} (${code})`);
  }
  let data: any;
  try {
    data = JSON.parse(text);
  } catch {
    throw new SchemaError(`${path}: not valid JSON`);
  }
  const model = data.model;
  if (!model || typeof model.family !== "string" || typeof model.n_sites !== "number") {
    throw new SchemaError(`${path}: missing or malformed "model" block`);
  }
  if (!Array.isArray(data.subsystems)) {
    throw new SchemaError(`${path}: missing "subsystems" list`);
  }
  return {
    dir,
    family: model.family,
    nSites: model.n_sites,
    lam: Number(model.lam ?? 0),
    r: Number(model.r ?? 0),
    g: Number(model.g ?? 0),
    subsystems: data.subsystems.map((s: any) => String(s.label)),
    negativityKs: (data.negativity_ks ?? []).map((k: any) => Number(k)),
    seriesDeltas: (data.series_deltas ?? []).map((d: any) => Number(d)),
    trackEe: Boolean(data.track_ee ?? true),
  };
}

/** Display name used in legends and panel titles. */
export function modelName(run: RunInfo): string {
  if (run.family === "pxp") return "PXP";
  if (run.family === "pxpz") return "PXPZ";
  if (run.family === "pxpxp") return `PXPXP g=${run.g}`;
  return run.family;
}

/**
 * Assign run directories to a recipe's required families.
 *
 * Every required family must be matched by exactly one distinct run, except
 * that repeated requirements (fig5 wants two pxpxp runs) consume runs of
 * that family in ascending g order.
 */
export function matchRoles(runs: RunInfo[], required: string[]): RunInfo[] {
  const pool = new Map<string, RunInfo[]>();
  for (const run of runs) {
    const list = pool.get(run.family) ?? [];
    list.push(run);
    pool.set(run.family, list);
  }
  for (const list of pool.values()) {
    list.sort((a, b) => a.g - b.g || a.lam - b.lam);
  }
  const out: RunInfo[] = [];
  for (const family of required) {
    const list = pool.get(family);
    if (!list || list.length === 0) {
      const got = runs.map((r) => r.family).join(", ") || "none";
      throw new SchemaError(
        `recipe needs runs of families [${required.join(", ")}], got [${got}]`,
      );
    }
    out.push(list.shift() as RunInfo);
  }
  return out;
}
