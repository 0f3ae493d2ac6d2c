/** Time-series figure: observable expectation value over time, with the
 * late-time mean line and the analytic fluctuation band overlaid. */

import { numericColumn, parseCsv } from "./csv.js";
import { document, el, fmt, linearScale, text, ticks } from "./svg.js";

export interface TimeseriesSummary {
  time_avg: number;
  sqrt_inv_deff_bound: number;
}

export function parseSummary(jsonText: string): TimeseriesSummary {
  let data: Record<string, unknown>;
  try {
    data = JSON.parse(jsonText);
  } catch {
    throw new Error("summary is not valid JSON");
  }
  for (const key of ["time_avg", "sqrt_inv_deff_bound"]) {
    if (typeof data[key] !== "number") {
      throw new Error(`missing column ${key}`);
    }
  }
  return {
    time_avg: data.time_avg as number,
    sqrt_inv_deff_bound: data.sqrt_inv_deff_bound as number,
  };
}

const W = 800;
const H = 420;
const M = { left: 64, right: 24, top: 24, bottom: 52 };

export function renderTimeseries(seriesCsv: string, summaryJson: string): string {
  const table = parseCsv(seriesCsv, ["t", "expval"]);
  const summary = parseSummary(summaryJson);
  const t = numericColumn(table, "t");
  const y = numericColumn(table, "expval");

  const bandLo = summary.time_avg - summary.sqrt_inv_deff_bound;
  const bandHi = summary.time_avg + summary.sqrt_inv_deff_bound;
  const yMin = Math.min(...y, bandLo);
  const yMax = Math.max(...y, bandHi);
  const pad = 0.08 * (yMax - yMin || 1);
  const sx = linearScale([Math.min(...t), Math.max(...t)], [M.left, W - M.right]);
  const sy = linearScale([yMin - pad, yMax + pad], [H - M.bottom, M.top]);

  const body: string[] = [];
  // fluctuation band around the late-time average
  body.push(
    el("rect", {
      x: M.left,
      y: sy(bandHi),
      width: W - M.left - M.right,
      height: sy(bandLo) - sy(bandHi),
      fill: "#9ecae1",
      "fill-opacity": "0.35",
    }),
  );
  for (const edge of [bandLo, bandHi]) {
    body.push(
      el("line", {
        x1: M.left,
        y1: sy(edge),
        x2: W - M.right,
        y2: sy(edge),
        stroke: "#3182bd",
        "stroke-dasharray": "6 4",
        "stroke-width": "1",
      }),
    );
  }
  // series
  const points = t.map((tv, i) => `${fmt(sx(tv))},${fmt(sy(y[i]))}`).join(" ");
  body.push(
    el("polyline", {
      points,
      fill: "none",
      stroke: "#1f77b4",
      "stroke-width": "1",
    }),
  );
  // mean line
  body.push(
    el("line", {
      x1: M.left,
      y1: sy(summary.time_avg),
      x2: W - M.right,
      y2: sy(summary.time_avg),
      stroke: "#d62728",
      "stroke-width": "1.5",
    }),
  );
  // axes
  body.push(
    el("line", { x1: M.left, y1: H - M.bottom, x2: W - M.right, y2: H - M.bottom, stroke: "#222222" }),
    el("line", { x1: M.left, y1: M.top, x2: M.left, y2: H - M.bottom, stroke: "#222222" }),
  );
  for (const tv of ticks(sx.domain, 8)) {
    body.push(
      el("line", { x1: sx(tv), y1: H - M.bottom, x2: sx(tv), y2: H - M.bottom + 5, stroke: "#222222" }),
      text(sx(tv), H - M.bottom + 18, String(tv), "middle", 11),
    );
  }
  for (const yv of ticks(sy.domain, 6)) {
    body.push(
      el("line", { x1: M.left - 5, y1: sy(yv), x2: M.left, y2: sy(yv), stroke: "#222222" }),
      text(M.left - 8, sy(yv) + 4, yv.toPrecision(3), "end", 11),
    );
  }
  body.push(
    text((M.left + W - M.right) / 2, H - 14, "t", "middle", 13),
    text(16, (M.top + H - M.bottom) / 2, "expectation value", "middle", 13),
    text(W - M.right, M.top - 8, `mean ${summary.time_avg.toPrecision(3)}, band +-${summary.sqrt_inv_deff_bound.toPrecision(4)}`, "end", 11),
  );
  return document(W, H, body);
}
