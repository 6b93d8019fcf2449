export { EXIT_IO, EXIT_OK, EXIT_SCHEMA, EXIT_USAGE, IoError, SchemaError } from "./errors.js";
export { readTable, type Table } from "./csv.js";
export { matchRoles, modelName, readRunInfo, type RunInfo } from "./manifest.js";
export { findRecipe, RECIPES, type CurveRef, type FigureRecipe, type PanelSpec, type SeriesKind } from "./recipes.js";
export { niceTicks, PALETTE, renderFigure, type Curve, type Panel } from "./svg.js";
export { buildPanels, deltaTag, render } from "./figure.js";
export { main } from "./cli.js";
