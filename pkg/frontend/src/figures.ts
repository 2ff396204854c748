/**
 * Figure builders, one per CSV export suite.
 *
 * Each builder takes the directory a suite was exported into, reads the
 * CSV files the suite writes, and assembles a Figure.  File names follow
 * the exporter's conventions, so a figure name here is exactly the suite
 * name used to produce its inputs.
 */

import { existsSync } from "fs";
import { join } from "path";
import { readCsv, numericColumn, stringColumn, commentValue, Table } from "./csv.js";
import { Figure, Panel, Series, PALETTE } from "./svg.js";

export class UnknownFigure extends Error {
  constructor(name: string) {
    super(`unknown figure '${name}' (expected one of: ${Object.keys(FIGURES).join(", ")})`);
    this.name = "UnknownFigure";
  }
}

const BC_KEYS = ["nf", "ff", "h"] as const;
const BC_LABELS: Record<string, string> = {
  nf: "closed outflow",
  ff: "open outflow",
  h: "hostile outflow",
};

const PROFILE_MU_VALUES = [0.01, 0.02, 0.04, 0.06];
const PROFILE_Q_VALUES = [0.05, 0.1, 0.2, 0.4];

/** Wrap the config-echo comments into footer lines of bounded width. */
function footerFromComments(table: Table, maxWidth = 110): string[] {
  const lines: string[] = [];
  let current = "";
  for (const c of table.comments) {
    const piece = c.trim();
    if (!piece) continue;
    if (current && current.length + piece.length + 3 > maxWidth) {
      lines.push(current);
      current = piece;
    } else {
      current = current ? `${current}   ${piece}` : piece;
    }
  }
  if (current) lines.push(current);
  return lines;
}

function biomassFigure(dir: string): Figure {
  const table = readCsv(join(dir, "fig_biomass_vs_mu.csv"));
  const mu = numericColumn(table, "mu");
  const bc = stringColumn(table, "bc_type");
  const bu = numericColumn(table, "biomass_u");
  const bv = numericColumn(table, "biomass_v");

  const panelFor = (values: number[], title: string, yLabel: string): Panel => {
    const series: Series[] = BC_KEYS.map((key, k) => {
      const pts = mu
        .map((m, i) => ({ m, y: values[i], bc: bc[i] }))
        .filter((p) => p.bc === key)
        .sort((a, b) => a.m - b.m);
      return {
        label: BC_LABELS[key],
        xs: pts.map((p) => p.m),
        ys: pts.map((p) => p.y),
        color: PALETTE[k],
      };
    });
    return { title, xLabel: "transfer rate mu", yLabel, series };
  };

  return {
    title: "Steady-state biomass against the transfer rate",
    columns: 2,
    panels: [
      panelFor(bu, "drift compartment", "integral of u"),
      panelFor(bv, "benthic compartment", "integral of v"),
    ],
    footer: footerFromComments(table),
  };
}

function profileSweepFigure(name: string, key: "mu" | "q", values: number[], dir: string): Figure {
  const panels: Panel[] = [];
  let footer: string[] = [];
  for (const bc of BC_KEYS) {
    const tables = values.map((v) => readCsv(join(dir, `${name}_${bc}_${key}${String(v)}.csv`)));
    if (!footer.length) footer = footerFromComments(tables[0]);
    for (const field of ["u", "v"] as const) {
      const series: Series[] = tables.map((t, i) => ({
        label: `${key} = ${values[i]}`,
        xs: numericColumn(t, "x"),
        ys: numericColumn(t, field),
        color: PALETTE[i],
      }));
      panels.push({
        title: `${BC_LABELS[bc]}: ${field === "u" ? "drift" : "benthic"} profile`,
        xLabel: "position x",
        yLabel: `${field}(x)`,
        series,
      });
    }
  }
  const what = key === "mu" ? "transfer rate" : "advection speed";
  return {
    title: `Steady-state profiles across the ${what}`,
    columns: 2,
    panels,
    footer,
  };
}

function bistableFigure(name: string, title: string, dir: string): Figure {
  const panels: Panel[] = [];
  let footer: string[] = [];
  for (let i = 1; ; i += 1) {
    const trajPath = join(dir, `${name}_ic${i}_trajectory.csv`);
    if (i > 1 && !existsSync(trajPath)) break;
    const traj = readCsv(trajPath);
    const prof = readCsv(join(dir, `${name}_ic${i}_profile.csv`));
    if (!footer.length) footer = footerFromComments(traj);
    const u0 = commentValue(traj, "u0") ?? "?";
    const v0 = commentValue(traj, "v0") ?? "?";
    const outcome = commentValue(traj, "outcome") ?? commentValue(prof, "outcome") ?? "?";
    panels.push(
      {
        title: `u0=${u0}, v0=${v0}: biomass (${outcome})`,
        xLabel: "time t",
        yLabel: "biomass",
        series: [
          { label: "drift u", xs: numericColumn(traj, "t"), ys: numericColumn(traj, "biomass_u"), color: PALETTE[0] },
          { label: "benthic v", xs: numericColumn(traj, "t"), ys: numericColumn(traj, "biomass_v"), color: PALETTE[1] },
        ],
      },
      {
        title: `u0=${u0}, v0=${v0}: final profile`,
        xLabel: "position x",
        yLabel: "density",
        series: [
          { label: "u(x)", xs: numericColumn(prof, "x"), ys: numericColumn(prof, "u"), color: PALETTE[0] },
          { label: "v(x)", xs: numericColumn(prof, "x"), ys: numericColumn(prof, "v"), color: PALETTE[1] },
        ],
      },
    );
  }
  return { title, columns: 2, panels, footer };
}

export type FigureBuilder = (dir: string) => Figure;

/** Figure registry keyed by export-suite name. */
export const FIGURES: Record<string, FigureBuilder> = {
  fig_biomass_vs_mu: (dir) => biomassFigure(dir),
  fig_profiles_vs_mu: (dir) => profileSweepFigure("fig_profiles_vs_mu", "mu", PROFILE_MU_VALUES, dir),
  fig_profiles_vs_q: (dir) => profileSweepFigure("fig_profiles_vs_q", "q", PROFILE_Q_VALUES, dir),
  fig_bistable_ff: (dir) =>
    bistableFigure("fig_bistable_ff", "Initial-condition dependence, open channel", dir),
  fig_bistable_nfnf: (dir) =>
    bistableFigure("fig_bistable_nfnf", "Initial-condition dependence, closed channel", dir),
  fig_bistable_hetero: (dir) =>
    bistableFigure("fig_bistable_hetero", "Initial-condition dependence, heterogeneous habitat", dir),
};

/** Build the named figure from CSVs in `dir`.  Throws UnknownFigure. */
export function buildFigure(name: string, dir: string): Figure {
  const builder = FIGURES[name];
  if (!builder) throw new UnknownFigure(name);
  return builder(dir);
}
