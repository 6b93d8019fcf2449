/**
 * Turn a figure recipe plus completed run directories into an SVG string.
 *
 * Availability is checked against each run's manifest before any CSV is
 * opened: a required curve the manifest cannot supply is a schema error,
 * while a declared file that cannot be read from disk is an I/O error.
 */

import { join } from "node:path";

import { readTable } from "./csv.js";
import { SchemaError } from "./errors.js";
import { matchRoles, modelName, readRunInfo, RunInfo } from "./manifest.js";
import { CurveRef, FigureRecipe, SeriesKind } from "./recipes.js";
import { Curve, Panel, renderFigure } from "./svg.js";

// Matches the producer's "%g" formatting for the deltas used in file names.
export function deltaTag(d: number): string {
  return String(d);
}

const HEADERS: Record<SeriesKind, [string, string]> = {
  fidelity: ["t", "fidelity"],
  ee: ["t", "ee"],
  td: ["t", "td"],
  tvd: ["t", "tvd"],
  degree: ["delta", "degree"],
  degree1: ["delta", "degree1"],
  negativity: ["t", "negativity"],
};

function curveFileName(ref: CurveRef): string {
  switch (ref.kind) {
    case "fidelity":
      return "fidelity.csv";
    case "ee":
      return "ee_half.csv";
    case "td":
      return `td_${ref.subsystem}_${deltaTag(ref.delta as number)}.csv`;
    case "tvd":
      return `tvd_${ref.subsystem}_${deltaTag(ref.delta as number)}.csv`;
    case "degree":
      return `degree_${ref.subsystem}.csv`;
    case "degree1":
      return `degree1_${ref.subsystem}.csv`;
    case "negativity":
      return `negativity_${ref.subsystem}.csv`;
  }
}

/** Why the run's manifest cannot supply this curve, or null if it can. */
function unavailable(ref: CurveRef, run: RunInfo): string | null {
  if (ref.kind === "ee" && !run.trackEe) {
    return "entropy tracking was disabled";
  }
  if (ref.kind === "negativity") {
    const k = Number((ref.subsystem ?? "").slice(1));
    if (!run.negativityKs.includes(k)) {
      return `negativity block size ${ref.subsystem} not computed`;
    }
    return null;
  }
  if (ref.subsystem !== undefined && !run.subsystems.includes(ref.subsystem)) {
    return `subsystem ${ref.subsystem} not tracked`;
  }
  if (ref.delta !== undefined && !run.seriesDeltas.includes(ref.delta)) {
    return `shift delta=${ref.delta} not among the run's series deltas`;
  }
  return null;
}

function loadCurve(ref: CurveRef, run: RunInfo): Curve | null {
  const why = unavailable(ref, run);
  if (why !== null) {
    if (ref.optional) return null;
    throw new SchemaError(`${run.dir}: ${why} (needed for ${ref.kind})`);
  }
  const table = readTable(join(run.dir, curveFileName(ref)), HEADERS[ref.kind]);
  return {
    label: ref.label ?? modelName(run),
    x: table.values[0],
    y: table.values[1],
  };
}

export function buildPanels(recipe: FigureRecipe, runs: RunInfo[]): Panel[] {
  return recipe.panels.map((spec) => {
    const curves: Curve[] = [];
    for (const ref of spec.curves) {
      const curve = loadCurve(ref, runs[ref.role]);
      if (curve !== null) curves.push(curve);
    }
    if (curves.length === 0) {
      throw new SchemaError(
        `panel "${spec.title}" of ${recipe.id}: no curve available from the supplied runs`,
      );
    }
    return { title: spec.title, xLabel: spec.xLabel, yLabel: spec.yLabel, curves };
  });
}

export function render(recipe: FigureRecipe, runDirs: string[]): string {
  const runs = matchRoles(runDirs.map(readRunInfo), recipe.roles);
  return renderFigure(recipe.title, buildPanels(recipe, runs), recipe.cols);
}
