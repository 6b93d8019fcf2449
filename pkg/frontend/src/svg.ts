/**
 * Deterministic SVG line-plot rendering. No timestamps, no randomness,
 * fixed-precision coordinates: the same panels always serialize to the
 * same bytes.
 */

export interface Curve {
  label: string;
  x: number[];
  y: number[];
}

export interface Panel {
  title: string;
  xLabel: string;
  yLabel: string;
  curves: Curve[];
}

export const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
];

const PANEL_W = 420;
const PANEL_H = 320;
const GAP = 14;
const MARGIN = { left: 62, right: 14, top: 30, bottom: 44 };
const TITLE_H = 30;

export function esc(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

// Heckbert's "nice numbers": round a span to 1/2/5 times a power of ten.
function niceNum(span: number, round: boolean): number {
  const exp = Math.floor(Math.log10(span));
  const f = span / Math.pow(10, exp);
  let nf: number;
  if (round) {
    nf = f < 1.5 ? 1 : f < 3 ? 2 : f < 7 ? 5 : 10;
  } else {
    nf = f <= 1 ? 1 : f <= 2 ? 2 : f <= 5 ? 5 : 10;
  }
  return nf * Math.pow(10, exp);
}

export function niceTicks(lo: number, hi: number, target = 5): number[] {
  if (!(hi > lo)) {
    hi = lo + (Math.abs(lo) || 1);
  }
  const step = niceNum(niceNum(hi - lo, false) / (target - 1), true);
  const start = Math.ceil(lo / step) * step;
  const ticks: number[] = [];
  for (let v = start; v <= hi + step * 1e-9; v += step) {
    // snap away float dust so labels stay clean
    ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return ticks;
}

function fmtTick(v: number): string {
  if (v === 0) return "0";
  return String(parseFloat(v.toPrecision(10)));
}

interface Range {
  lo: number;
  hi: number;
}

function dataRange(vals: number[][]): Range {
  let lo = Infinity;
  let hi = -Infinity;
  for (const arr of vals) {
    for (const v of arr) {
      if (v < lo) lo = v;
      if (v > hi) hi = v;
    }
  }
  if (!isFinite(lo)) {
    lo = 0;
    hi = 1;
  }
  return { lo, hi };
}

function renderPanel(panel: Panel, x0: number, y0: number, idx: number): string {
  const pw = PANEL_W - MARGIN.left - MARGIN.right;
  const ph = PANEL_H - MARGIN.top - MARGIN.bottom;
  const left = x0 + MARGIN.left;
  const top = y0 + MARGIN.top;

  const xr = dataRange(panel.curves.map((c) => c.x));
  const yr = dataRange(panel.curves.map((c) => c.y));
  const pad = (yr.hi - yr.lo || Math.abs(yr.hi) || 1) * 0.05;
  yr.lo -= pad;
  yr.hi += pad;

  const sx = (v: number) => left + ((v - xr.lo) / (xr.hi - xr.lo || 1)) * pw;
  const sy = (v: number) => top + ph - ((v - yr.lo) / (yr.hi - yr.lo)) * ph;

  const parts: string[] = [];
  parts.push(
    `<rect x="${left}" y="${top}" width="${pw}" height="${ph}" fill="none" stroke="#444" stroke-width="1"/>`,
  );
  parts.push(
    `<text x="${x0 + PANEL_W / 2}" y="${y0 + MARGIN.top - 10}" text-anchor="middle" font-size="13" font-weight="600">${esc(panel.title)}</text>`,
  );

  for (const tv of niceTicks(xr.lo, xr.hi, 6)) {
    if (tv < xr.lo - 1e-9 || tv > xr.hi + 1e-9) continue;
    const px = sx(tv).toFixed(2);
    parts.push(
      `<line x1="${px}" y1="${top}" x2="${px}" y2="${top + ph}" stroke="#ddd" stroke-width="0.5"/>`,
      `<line x1="${px}" y1="${top + ph}" x2="${px}" y2="${top + ph + 4}" stroke="#444" stroke-width="1"/>`,
      `<text x="${px}" y="${top + ph + 16}" text-anchor="middle" font-size="11">${fmtTick(tv)}</text>`,
    );
  }
  for (const tv of niceTicks(yr.lo, yr.hi, 5)) {
    if (tv < yr.lo - 1e-9 || tv > yr.hi + 1e-9) continue;
    const py = sy(tv).toFixed(2);
    parts.push(
      `<line x1="${left}" y1="${py}" x2="${left + pw}" y2="${py}" stroke="#ddd" stroke-width="0.5"/>`,
      `<line x1="${left - 4}" y1="${py}" x2="${left}" y2="${py}" stroke="#444" stroke-width="1"/>`,
      `<text x="${left - 7}" y="${py}" text-anchor="end" dominant-baseline="middle" font-size="11">${fmtTick(tv)}</text>`,
    );
  }

  parts.push(
    `<text x="${x0 + PANEL_W / 2}" y="${y0 + PANEL_H - 10}" text-anchor="middle" font-size="12">${esc(panel.xLabel)}</text>`,
    `<text x="${x0 + 14}" y="${top + ph / 2}" text-anchor="middle" font-size="12" transform="rotate(-90 ${x0 + 14} ${top + ph / 2})">${esc(panel.yLabel)}</text>`,
  );

  parts.push(`<g clip-path="url(#clip${idx})">`);
  panel.curves.forEach((c, ci) => {
    const pts: string[] = [];
    for (let i = 0; i < c.x.length; i++) {
      pts.push(`${sx(c.x[i]).toFixed(2)},${sy(c.y[i]).toFixed(2)}`);
    }
    const color = PALETTE[ci % PALETTE.length];
    parts.push(
      `<polyline points="${pts.join(" ")}" fill="none" stroke="${color}" stroke-width="1.3"/>`,
    );
  });
  parts.push(`</g>`);

  // legend, top right inside the frame
  panel.curves.forEach((c, ci) => {
    const ly = top + 12 + ci * 14;
    const lx = left + pw - 100;
    const color = PALETTE[ci % PALETTE.length];
    parts.push(
      `<line x1="${lx}" y1="${ly}" x2="${lx + 18}" y2="${ly}" stroke="${color}" stroke-width="1.3"/>`,
      `<text x="${lx + 23}" y="${ly}" dominant-baseline="middle" font-size="11">${esc(c.label)}</text>`,
    );
  });

  const clip = `<clipPath id="clip${idx}"><rect x="${left}" y="${top}" width="${pw}" height="${ph}"/></clipPath>`;
  return clip + parts.join("\n");
}

export function renderFigure(title: string, panels: Panel[], cols: number): string {
  const rows = Math.ceil(panels.length / cols);
  const width = cols * PANEL_W + (cols - 1) * GAP + 2 * GAP;
  const height = TITLE_H + rows * PANEL_H + (rows - 1) * GAP + 2 * GAP;

  const body: string[] = [];
  body.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`,
  );
  body.push(`<rect x="0" y="0" width="${width}" height="${height}" fill="#ffffff"/>`);
  body.push(
    `<text x="${width / 2}" y="${GAP + 14}" text-anchor="middle" font-size="15" font-weight="600">${esc(title)}</text>`,
  );
  panels.forEach((p, i) => {
    const r = Math.floor(i / cols);
    const c = i % cols;
    const x0 = GAP + c * (PANEL_W + GAP);
    const y0 = TITLE_H + GAP + r * (PANEL_H + GAP);
    body.push(renderPanel(p, x0, y0, i));
  });
  body.push(`</svg>`);
  return body.join("\n") + "\n";
}
