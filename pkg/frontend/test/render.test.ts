import { cpSync, mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import { IoError, SchemaError } from "../src/errors.js";
import { render } from "../src/figure.js";
import { findRecipe } from "../src/recipes.js";

const FIX = fileURLToPath(new URL("fixtures", import.meta.url));
const PXP = join(FIX, "pxp");
const PXPZ = join(FIX, "pxpz");
const G01 = join(FIX, "pxpxp_g0.1");
const G02 = join(FIX, "pxpxp_g0.2");

function runsFor(id: string): string[] {
  if (id === "fig5") return [PXP, G01, G02];
  if (id === "fig6") return [PXPZ];
  return [PXP, PXPZ];
}

function recipe(id: string) {
  const r = findRecipe(id);
  if (!r) throw new Error(`no recipe ${id}`);
  return r;
}

/** Copy a fixture run and rewrite its manifest in place. */
function doctored(src: string, patch: (m: any) => void): string {
  const dst = mkdtempSync(join(tmpdir(), "plotkit-run-"));
  cpSync(src, dst, { recursive: true });
  const path = join(dst, "manifest.json");
  const manifest = JSON.parse(readFileSync(path, "utf8"));
  patch(manifest);
  writeFileSync(path, JSON.stringify(manifest));
  return dst;
}

describe("render", () => {
  for (const id of ["fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8"]) {
    it(`produces an SVG for ${id}`, () => {
      const svg = render(recipe(id), runsFor(id));
      expect(svg.startsWith("<svg ")).toBe(true);
      expect(svg.trimEnd().endsWith("</svg>")).toBe(true);
      for (const panel of recipe(id).panels) {
        expect(svg).toContain(`>${panel.title.replace(/&/g, "&amp;")}<`);
      }
    });
  }

  it("is deterministic", () => {
    const a = render(recipe("fig2"), runsFor("fig2"));
    const b = render(recipe("fig2"), runsFor("fig2"));
    expect(a).toBe(b);
  });

  it("legends curves by model name when the recipe gives no label", () => {
    const svg = render(recipe("fig5"), runsFor("fig5"));
    expect(svg).toContain(">PXP<");
    expect(svg).toContain(">PXPXP g=0.1<");
    expect(svg).toContain(">PXPXP g=0.2<");
  });

  it("accepts run directories in any order", () => {
    const forward = render(recipe("fig1"), [PXP, PXPZ]);
    const swapped = render(recipe("fig1"), [PXPZ, PXP]);
    expect(swapped).toBe(forward);
  });

  it("rejects runs that do not cover the required families", () => {
    expect(() => render(recipe("fig1"), [PXP, PXP])).toThrow(SchemaError);
    expect(() => render(recipe("fig1"), [PXP, PXP])).toThrow(/pxpz/);
  });

  it("treats a manifest gap as a schema error", () => {
    const dir = doctored(PXP, (m) => {
      m.track_ee = false;
    });
    try {
      expect(() => render(recipe("fig1"), [dir, PXPZ])).toThrow(SchemaError);
      expect(() => render(recipe("fig1"), [dir, PXPZ])).toThrow(/entropy tracking/);
    } finally {
      rmSync(dir, { recursive: true });
    }
  });

  it("drops optional curves the manifest does not declare", () => {
    const a = doctored(PXP, (m) => {
      m.negativity_ks = [1, 2];
    });
    const b = doctored(PXPZ, (m) => {
      m.negativity_ks = [1, 2];
    });
    try {
      const svg = render(recipe("fig8"), [a, b]);
      expect(svg).toContain(">k=2<");
      expect(svg).not.toContain(">k=3<");
    } finally {
      rmSync(a, { recursive: true });
      rmSync(b, { recursive: true });
    }
  });

  it("treats a declared but unreadable series as an I/O error", () => {
    const dir = doctored(PXPZ, () => {});
    rmSync(join(dir, "degree_l4.csv"));
    try {
      expect(() => render(recipe("fig4"), [PXP, dir])).toThrow(IoError);
    } finally {
      rmSync(dir, { recursive: true });
    }
  });
});
