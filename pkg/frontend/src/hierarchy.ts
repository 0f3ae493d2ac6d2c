/** Hierarchy figure: rescaled inverse effective dimension against bond
 * dimension, one log-scale curve per geometry. */

import { parseCsv } from "./csv.js";
import { document, el, fmt, linearScale, text } from "./svg.js";

const PALETTE = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#8c564b", "#e377c2"];

const W = 800;
const H = 460;
const M = { left: 70, right: 190, top: 24, bottom: 52 };

export function renderHierarchy(csvText: string): string {
  const table = parseCsv(csvText, ["geometry", "b", "scaled_float"]);
  const groups = new Map<string, { b: number; y: number }[]>();
  for (const row of table.rows) {
    const b = Number(row.b);
    const y = Number(row.scaled_float);
    if (!Number.isFinite(b) || !Number.isFinite(y)) {
      throw new Error(`non-numeric row for geometry ${row.geometry}`);
    }
    if (y <= 0) {
      throw new Error(`log scale needs positive values, got ${y}`);
    }
    if (!groups.has(row.geometry)) {
      groups.set(row.geometry, []);
    }
    groups.get(row.geometry)!.push({ b, y });
  }

  const allB = [...groups.values()].flat().map((p) => p.b);
  const allLog = [...groups.values()].flat().map((p) => Math.log10(p.y));
  const sx = linearScale([Math.min(...allB), Math.max(...allB)], [M.left, W - M.right]);
  const lo = Math.floor(Math.min(...allLog));
  const hi = Math.ceil(Math.max(...allLog));
  const sy = linearScale([lo, hi], [H - M.bottom, M.top]);

  const body: string[] = [];
  // log gridlines at powers of ten
  for (let k = lo; k <= hi; k += 1) {
    body.push(
      el("line", { x1: M.left, y1: sy(k), x2: W - M.right, y2: sy(k), stroke: "#dddddd" }),
      text(M.left - 8, sy(k) + 4, `1e${k}`, "end", 11),
    );
  }
  let colorIndex = 0;
  for (const [name, pts] of groups) {
    const color = PALETTE[colorIndex % PALETTE.length];
    const sorted = [...pts].sort((p, q) => p.b - q.b);
    const points = sorted.map((p) => `${fmt(sx(p.b))},${fmt(sy(Math.log10(p.y)))}`).join(" ");
    body.push(
      el("polyline", { points, fill: "none", stroke: color, "stroke-width": "1.5" }),
    );
    for (const p of sorted) {
      body.push(
        el("circle", { cx: sx(p.b), cy: sy(Math.log10(p.y)), r: 3, fill: color }),
      );
    }
    const legendY = M.top + 16 + 18 * colorIndex;
    body.push(
      el("line", { x1: W - M.right + 12, y1: legendY - 4, x2: W - M.right + 36, y2: legendY - 4, stroke: color, "stroke-width": "2" }),
      text(W - M.right + 42, legendY, name, "start", 12),
    );
    colorIndex += 1;
  }
  body.push(
    el("line", { x1: M.left, y1: H - M.bottom, x2: W - M.right, y2: H - M.bottom, stroke: "#222222" }),
    el("line", { x1: M.left, y1: M.top, x2: M.left, y2: H - M.bottom, stroke: "#222222" }),
  );
  const bValues = [...new Set(allB)].sort((a, b) => a - b);
  for (const b of bValues) {
    body.push(
      el("line", { x1: sx(b), y1: H - M.bottom, x2: sx(b), y2: H - M.bottom + 5, stroke: "#222222" }),
      text(sx(b), H - M.bottom + 18, String(b), "middle", 11),
    );
  }
  body.push(
    text((M.left + W - M.right) / 2, H - 14, "bond dimension b (= a)", "middle", 13),
    text(18, (M.top + H - M.bottom) / 2, "a^n / D_eff", "middle", 13),
  );
  return document(W, H, body);
}
