/** Declarative figure recipes: which runs, which panels, which curves.
 *
 * A curve names a series kind plus the coordinates needed to locate its CSV
 * inside a matched run directory.  Curves without a label legend under the
 * run's model name.  Optional curves are dropped silently when the run's
 * manifest does not declare the subsystem or block size; required ones make
 * validation fail instead.
 */

export type SeriesKind =
  | "fidelity"
  | "ee"
  | "td"
  | "tvd"
  | "degree"
  | "degree1"
  | "negativity";

export interface CurveRef {
  role: number;
  kind: SeriesKind;
  subsystem?: string;
  delta?: number;
  label?: string;
  optional?: boolean;
}

export interface PanelSpec {
  title: string;
  xLabel: string;
  yLabel: string;
  curves: CurveRef[];
}

export interface FigureRecipe {
  id: string;
  title: string;
  /** Model families the caller must supply run directories for, in order. */
  roles: string[];
  cols: number;
  panels: PanelSpec[];
}

const ELLS = [1, 2, 3, 4];

function tdPanel(title: string, role: number, delta: number): PanelSpec {
  return {
    title,
    xLabel: "t",
    yLabel: "T_d",
    curves: ELLS.map((ell) => ({
      role,
      kind: "td" as const,
      subsystem: `l${ell}`,
      delta,
      label: `l=${ell}`,
    })),
  };
}

function vdPanel(title: string, role: number, delta: number): PanelSpec {
  return {
    title,
    xLabel: "t",
    yLabel: "V_d",
    curves: ELLS.map((ell) => ({
      role,
      kind: "tvd" as const,
      subsystem: `l${ell}`,
      delta,
      label: `l=${ell}`,
    })),
  };
}

function negPanel(title: string, role: number): PanelSpec {
  return {
    title,
    xLabel: "t",
    yLabel: "negativity",
    curves: [1, 2, 3, 4, 5].map((k) => ({
      role,
      kind: "negativity" as const,
      subsystem: `k${k}`,
      label: `k=${k}`,
      optional: true,
    })),
  };
}

export const RECIPES: FigureRecipe[] = [
  {
    id: "fig1",
    title: "Entanglement entropy and fidelity",
    roles: ["pxp", "pxpz"],
    cols: 2,
    panels: [
      {
        title: "Half-chain entropy",
        xLabel: "t",
        yLabel: "S",
        curves: [
          { role: 0, kind: "ee" },
          { role: 1, kind: "ee" },
        ],
      },
      {
        title: "Fidelity",
        xLabel: "t",
        yLabel: "F",
        curves: [
          { role: 0, kind: "fidelity" },
          { role: 1, kind: "fidelity" },
        ],
      },
    ],
  },
  {
    id: "fig2",
    title: "Trace distance of shifted subsystem states",
    roles: ["pxp", "pxpz"],
    cols: 3,
    panels: [
      tdPanel("PXP, δ=1", 0, 1),
      tdPanel("PXP, δ=2", 0, 2),
      tdPanel("PXP, δ=3", 0, 3),
      tdPanel("PXPZ, δ=1", 1, 1),
      tdPanel("PXPZ, δ=2", 1, 2),
      tdPanel("PXPZ, δ=3", 1, 3),
    ],
  },
  {
    id: "fig3",
    title: "Model comparison for one- and four-spin subsystems",
    roles: ["pxp", "pxpz"],
    cols: 3,
    panels: ([1, 4] as const).flatMap((ell) =>
      [1, 2, 3].map((delta) => ({
        title: `l=${ell}, δ=${delta}`,
        xLabel: "t",
        yLabel: "T_d",
        curves: [
          { role: 0, kind: "td" as const, subsystem: `l${ell}`, delta },
          { role: 1, kind: "td" as const, subsystem: `l${ell}`, delta },
        ],
      })),
    ),
  },
  {
    id: "fig4",
    title: "Backflow degree over the shift grid",
    roles: ["pxp", "pxpz"],
    cols: 3,
    panels: [
      {
        title: "PXP",
        xLabel: "δ",
        yLabel: "D(δ)",
        curves: ELLS.map((ell) => ({
          role: 0,
          kind: "degree" as const,
          subsystem: `l${ell}`,
          label: `l=${ell}`,
        })),
      },
      {
        title: "PXPZ",
        xLabel: "δ",
        yLabel: "D(δ)",
        curves: ELLS.map((ell) => ({
          role: 1,
          kind: "degree" as const,
          subsystem: `l${ell}`,
          label: `l=${ell}`,
        })),
      },
      {
        title: "l=4 comparison",
        xLabel: "δ",
        yLabel: "D(δ)",
        curves: [
          { role: 0, kind: "degree", subsystem: "l4" },
          { role: 1, kind: "degree", subsystem: "l4" },
        ],
      },
    ],
  },
  {
    id: "fig5",
    title: "Double-flip deformation drains the backflow",
    roles: ["pxp", "pxpxp", "pxpxp"],
    cols: 3,
    panels: [
      {
        title: "T_d(l=4, t, δ=1)",
        xLabel: "t",
        yLabel: "T_d",
        curves: [0, 1, 2].map((role) => ({
          role,
          kind: "td" as const,
          subsystem: "l4",
          delta: 1,
        })),
      },
      {
        title: "T_d(l=4, t, δ=2)",
        xLabel: "t",
        yLabel: "T_d",
        curves: [0, 1, 2].map((role) => ({
          role,
          kind: "td" as const,
          subsystem: "l4",
          delta: 2,
        })),
      },
      {
        title: "D(δ), l=4",
        xLabel: "δ",
        yLabel: "D(δ)",
        curves: [0, 1, 2].map((role) => ({
          role,
          kind: "degree" as const,
          subsystem: "l4",
        })),
      },
    ],
  },
  {
    id: "fig6",
    title: "Adjacent vs odd-separated two-spin subsystems",
    roles: ["pxpz"],
    cols: 3,
    panels: [
      {
        title: "T_d(t, δ=1)",
        xLabel: "t",
        yLabel: "T_d",
        curves: [
          { role: 0, kind: "td", subsystem: "l2", delta: 1, label: "odd-separated" },
          { role: 0, kind: "td", subsystem: "l2adj", delta: 1, label: "adjacent" },
        ],
      },
      {
        title: "T_d(t, δ=2)",
        xLabel: "t",
        yLabel: "T_d",
        curves: [
          { role: 0, kind: "td", subsystem: "l2", delta: 2, label: "odd-separated" },
          { role: 0, kind: "td", subsystem: "l2adj", delta: 2, label: "adjacent" },
        ],
      },
      {
        title: "D(δ)",
        xLabel: "δ",
        yLabel: "D(δ)",
        curves: [
          { role: 0, kind: "degree", subsystem: "l2", label: "odd-separated" },
          { role: 0, kind: "degree", subsystem: "l2adj", label: "adjacent" },
        ],
      },
    ],
  },
  {
    id: "fig7",
    title: "Spectral total variation distance and its degree",
    roles: ["pxp", "pxpz"],
    cols: 3,
    panels: [
      vdPanel("PXP, δ=1", 0, 1),
      vdPanel("PXP, δ=2", 0, 2),
      {
        title: "PXP",
        xLabel: "δ",
        yLabel: "D1(δ)",
        curves: ELLS.map((ell) => ({
          role: 0,
          kind: "degree1" as const,
          subsystem: `l${ell}`,
          label: `l=${ell}`,
        })),
      },
      vdPanel("PXPZ, δ=1", 1, 1),
      vdPanel("PXPZ, δ=2", 1, 2),
      {
        title: "PXPZ",
        xLabel: "δ",
        yLabel: "D1(δ)",
        curves: ELLS.map((ell) => ({
          role: 1,
          kind: "degree1" as const,
          subsystem: `l${ell}`,
          label: `l=${ell}`,
        })),
      },
    ],
  },
  {
    id: "fig8",
    title: "Block-probe negativity dynamics",
    roles: ["pxp", "pxpz"],
    cols: 2,
    panels: [
      {
        title: "k=1 block and probe",
        xLabel: "t",
        yLabel: "negativity",
        curves: [
          { role: 0, kind: "negativity", subsystem: "k1" },
          { role: 1, kind: "negativity", subsystem: "k1" },
        ],
      },
      {
        title: "k=2 block and probe",
        xLabel: "t",
        yLabel: "negativity",
        curves: [
          { role: 0, kind: "negativity", subsystem: "k2" },
          { role: 1, kind: "negativity", subsystem: "k2" },
        ],
      },
      negPanel("PXP, k-1", 0),
      negPanel("PXPZ, k-1", 1),
    ],
  },
];

export function findRecipe(id: string): FigureRecipe | undefined {
  return RECIPES.find((r) => r.id === id);
}
