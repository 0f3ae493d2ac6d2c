/** Deterministic SVG building blocks: fixed attribute order, fixed number
 * formatting, no timestamps — identical inputs yield identical bytes. */

export function fmt(x: number): string {
  if (!Number.isFinite(x)) {
    throw new Error(`cannot place non-finite coordinate ${x}`);
  }
  const s = x.toFixed(3);
  return s === "-0.000" ? "0.000" : s;
}

export function el(
  tag: string,
  attrs: Record<string, string | number>,
  children: string[] = [],
): string {
  const parts = Object.entries(attrs).map(
    ([k, v]) => `${k}="${typeof v === "number" ? fmt(v) : v}"`,
  );
  const open = `<${tag}${parts.length ? " " + parts.join(" ") : ""}>`;
  if (children.length === 0) {
    return open.replace(/>$/, "/>");
  }
  return `${open}${children.join("")}</${tag}>`;
}

export function text(
  x: number,
  y: number,
  content: string,
  anchor: "start" | "middle" | "end" = "start",
  size = 12,
): string {
  return el(
    "text",
    {
      x,
      y,
      "text-anchor": anchor,
      "font-family": "Helvetica, Arial, sans-serif",
      "font-size": String(size),
      fill: "#222222",
    },
    [content],
  );
}

export interface Scale {
  (value: number): number;
  domain: [number, number];
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  const scale = ((value: number) => r0 + ((value - d0) / span) * (r1 - r0)) as Scale;
  scale.domain = domain;
  return scale;
}

export function ticks(domain: [number, number], count: number): number[] {
  const [lo, hi] = domain;
  const span = hi - lo || 1;
  const rawStep = span / Math.max(1, count);
  const power = Math.pow(10, Math.floor(Math.log10(rawStep)));
  const candidates = [1, 2, 5, 10].map((m) => m * power);
  const step = candidates.find((c) => span / c <= count) ?? candidates[3];
  const first = Math.ceil(lo / step) * step;
  const out: number[] = [];
  for (let v = first; v <= hi + 1e-9 * span; v += step) {
    out.push(Number(v.toPrecision(12)));
  }
  return out;
}

export function document(width: number, height: number, body: string[]): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`,
    el("rect", { x: 0, y: 0, width, height, fill: "#ffffff" }),
    ...body,
    "</svg>",
  ].join("\n");
}
