/**
 * Dependency-free SVG chart primitives.
 *
 * Everything is built as plain strings: a figure is a grid of panels,
 * each panel an x/y line chart with its own ranges, ticks, and legend.
 * No DOM, no canvas, no external renderer — the output is deterministic
 * for identical input, which the golden-hash test relies on.
 */

/** One polyline within a panel. */
export interface Series {
  label: string;
  xs: number[];
  ys: number[];
  color: string;
  dash?: string;
}

/** One chart cell within a figure. */
export interface Panel {
  title: string;
  xLabel: string;
  yLabel: string;
  series: Series[];
}

/** A complete figure: titled grid of panels plus footer lines. */
export interface Figure {
  title: string;
  columns: number;
  panels: Panel[];
  footer: string[];
}

export const PALETTE = ["#4361ee", "#e63946", "#2d6a4f", "#f4a261", "#7209b7", "#6c757d"];

/** Escape text for XML attribute/content positions. */
export function esc(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Round-number tick positions covering [min, max]. */
export function niceTicks(min: number, max: number, count = 5): number[] {
  if (!isFinite(min) || !isFinite(max)) return [0, 1];
  if (min === max) {
    min -= Math.abs(min) * 0.5 || 0.5;
    max += Math.abs(max) * 0.5 || 0.5;
  }
  const span = max - min;
  const step0 = span / Math.max(1, count);
  const mag = Math.pow(10, Math.floor(Math.log10(step0)));
  const norm = step0 / mag;
  const step = (norm < 1.5 ? 1 : norm < 3 ? 2 : norm < 7 ? 5 : 10) * mag;
  const lo = Math.ceil(min / step) * step;
  const ticks: number[] = [];
  for (let v = lo; v <= max + step * 1e-9; v += step) {
    ticks.push(Number(v.toPrecision(12)));
  }
  return ticks.length ? ticks : [min, max];
}

/** Compact tick label: trims float noise, keeps scientific form readable. */
export function fmtTick(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) return v.toExponential(1).replace("e+", "e");
  return String(Number(v.toPrecision(6)));
}

const CELL_W = 340;
const CELL_H = 235;
const MARGIN = { top: 26, right: 14, bottom: 38, left: 52 };
const TITLE_H = 30;
const FOOTER_LINE_H = 13;

function dataRange(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (!isFinite(v)) continue;
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (lo > hi) return [0, 1]; // no data: draw empty axes over a unit box
  if (lo === hi) {
    const pad = Math.abs(lo) * 0.1 || 0.5;
    return [lo - pad, hi + pad];
  }
  const pad = (hi - lo) * 0.04;
  return [lo - pad, hi + pad];
}

function px(v: number): string {
  return v.toFixed(2);
}

function renderPanel(panel: Panel, ox: number, oy: number): string {
  const plotW = CELL_W - MARGIN.left - MARGIN.right;
  const plotH = CELL_H - MARGIN.top - MARGIN.bottom;
  const allX = panel.series.flatMap((s) => s.xs);
  const allY = panel.series.flatMap((s) => s.ys);
  const [x0, x1] = dataRange(allX);
  const [y0, y1] = dataRange(allY);
  const xOf = (v: number) => ox + MARGIN.left + ((v - x0) / (x1 - x0)) * plotW;
  const yOf = (v: number) => oy + MARGIN.top + plotH - ((v - y0) / (y1 - y0)) * plotH;

  const parts: string[] = [];
  parts.push(
    `<text x="${px(ox + MARGIN.left)}" y="${px(oy + 16)}" font-size="12" font-weight="bold" fill="#222">${esc(panel.title)}</text>`,
  );

  for (const t of niceTicks(x0, x1)) {
    const gx = xOf(t);
    parts.push(
      `<line x1="${px(gx)}" y1="${px(oy + MARGIN.top)}" x2="${px(gx)}" y2="${px(oy + MARGIN.top + plotH)}" stroke="#eee"/>`,
      `<text x="${px(gx)}" y="${px(oy + MARGIN.top + plotH + 14)}" font-size="10" fill="#555" text-anchor="middle">${esc(fmtTick(t))}</text>`,
    );
  }
  for (const t of niceTicks(y0, y1)) {
    const gy = yOf(t);
    parts.push(
      `<line x1="${px(ox + MARGIN.left)}" y1="${px(gy)}" x2="${px(ox + MARGIN.left + plotW)}" y2="${px(gy)}" stroke="#eee"/>`,
      `<text x="${px(ox + MARGIN.left - 5)}" y="${px(gy + 3)}" font-size="10" fill="#555" text-anchor="end">${esc(fmtTick(t))}</text>`,
    );
  }

  // axes on top of the grid
  parts.push(
    `<line x1="${px(ox + MARGIN.left)}" y1="${px(oy + MARGIN.top)}" x2="${px(ox + MARGIN.left)}" y2="${px(oy + MARGIN.top + plotH)}" stroke="#333"/>`,
    `<line x1="${px(ox + MARGIN.left)}" y1="${px(oy + MARGIN.top + plotH)}" x2="${px(ox + MARGIN.left + plotW)}" y2="${px(oy + MARGIN.top + plotH)}" stroke="#333"/>`,
    `<text x="${px(ox + MARGIN.left + plotW / 2)}" y="${px(oy + CELL_H - 8)}" font-size="11" fill="#333" text-anchor="middle">${esc(panel.xLabel)}</text>`,
    `<text x="${px(ox + 12)}" y="${px(oy + MARGIN.top + plotH / 2)}" font-size="11" fill="#333" text-anchor="middle" transform="rotate(-90 ${px(ox + 12)} ${px(oy + MARGIN.top + plotH / 2)})">${esc(panel.yLabel)}</text>`,
  );

  for (const s of panel.series) {
    const pts = s.xs
      .map((x, i) => ({ x, y: s.ys[i] }))
      .filter((p) => isFinite(p.x) && isFinite(p.y))
      .map((p) => `${px(xOf(p.x))},${px(yOf(p.y))}`)
      .join(" ");
    if (!pts) continue;
    const dash = s.dash ? ` stroke-dasharray="${s.dash}"` : "";
    parts.push(
      `<polyline points="${pts}" fill="none" stroke="${s.color}" stroke-width="1.5"${dash}/>`,
    );
  }

  const labeled = panel.series.filter((s) => s.label && s.xs.length > 0);
  labeled.forEach((s, i) => {
    const lx = ox + MARGIN.left + plotW - 86;
    const ly = oy + MARGIN.top + 8 + i * 13;
    const dash = s.dash ? ` stroke-dasharray="${s.dash}"` : "";
    parts.push(
      `<line x1="${px(lx)}" y1="${px(ly)}" x2="${px(lx + 16)}" y2="${px(ly)}" stroke="${s.color}" stroke-width="1.5"${dash}/>`,
      `<text x="${px(lx + 20)}" y="${px(ly + 3)}" font-size="10" fill="#333">${esc(s.label)}</text>`,
    );
  });

  return parts.join("\n");
}

/** Render a complete figure to an SVG document string. */
export function renderFigure(fig: Figure): string {
  const cols = Math.max(1, fig.columns);
  const rows = Math.ceil(fig.panels.length / cols) || 1;
  const footerH = fig.footer.length ? fig.footer.length * FOOTER_LINE_H + 10 : 6;
  const width = cols * CELL_W + 20;
  const height = TITLE_H + rows * CELL_H + footerH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`,
    `<rect width="${width}" height="${height}" fill="#ffffff"/>`,
    `<text x="${px(width / 2)}" y="20" font-size="14" font-weight="bold" fill="#111" text-anchor="middle">${esc(fig.title)}</text>`,
  );
  fig.panels.forEach((panel, i) => {
    const ox = 10 + (i % cols) * CELL_W;
    const oy = TITLE_H + Math.floor(i / cols) * CELL_H;
    parts.push(renderPanel(panel, ox, oy));
  });
  fig.footer.forEach((line, i) => {
    const fy = TITLE_H + rows * CELL_H + 12 + i * FOOTER_LINE_H;
    parts.push(
      `<text x="10" y="${px(fy)}" font-size="9" fill="#888" font-family="monospace">${esc(line)}</text>`,
    );
  });
  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
