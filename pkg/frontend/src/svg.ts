/**
 * Tiny deterministic SVG scene builder: fixed number formatting, no
 * timestamps, no randomness, so identical inputs give byte-identical
 * files.
 */

export type ScaleKind = "linear" | "log";

export interface Scale {
  kind: ScaleKind;
  domain: [number, number];
  range: [number, number];
  apply(v: number): number;
  ticks(): number[];
}

export function fmt(v: number): string {
  if (!Number.isFinite(v)) return String(v);
  if (v === 0) return "0";
  const s = v.toPrecision(6);
  return s.includes(".") || s.includes("e")
    ? s.replace(/\.?0+($|e)/, "$1")
    : s;
}

export function makeScale(kind: ScaleKind, domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  if (kind === "log" && (d0 <= 0 || d1 <= 0)) {
    throw new Error(`log scale needs a positive domain, got [${d0}, ${d1}]`);
  }
  const t = (v: number) => (kind === "log" ? Math.log10(v) : v);
  const span = t(d1) - t(d0) || 1;
  return {
    kind,
    domain,
    range,
    apply(v: number): number {
      const frac = (t(v) - t(d0)) / span;
      return range[0] + frac * (range[1] - range[0]);
    },
    ticks(): number[] {
      if (kind === "log") {
        const lo = Math.ceil(Math.log10(d0) - 1e-9);
        const hi = Math.floor(Math.log10(d1) + 1e-9);
        const out: number[] = [];
        for (let e = lo; e <= hi; e++) out.push(10 ** e);
        if (out.length === 0) out.push(d0, d1);
        return out;
      }
      const raw = (d1 - d0) / 5;
      const mag = 10 ** Math.floor(Math.log10(raw));
      const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => (d1 - d0) / s <= 6)!;
      const out: number[] = [];
      for (let v = Math.ceil(d0 / step) * step; v <= d1 + 1e-12; v += step) {
        out.push(Number(v.toPrecision(12)));
      }
      return out;
    },
  };
}

export const PALETTE = [
  "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
  "#8c564b", "#17becf", "#7f7f7f",
];

export interface Margins {
  left: number;
  right: number;
  top: number;
  bottom: number;
}

export class Svg {
  readonly width: number;
  readonly height: number;
  private parts: string[] = [];

  constructor(width = 640, height = 480) {
    this.width = width;
    this.height = height;
  }

  add(fragment: string) {
    this.parts.push(fragment);
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke: string, opts = "") {
    this.add(
      `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" stroke="${stroke}" ${opts}/>`,
    );
  }

  polyline(pts: [number, number][], stroke: string, opts = "") {
    const d = pts.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    this.add(`<polyline points="${d}" fill="none" stroke="${stroke}" ${opts}/>`);
  }

  circle(x: number, y: number, r: number, fill: string) {
    this.add(`<circle cx="${fmt(x)}" cy="${fmt(y)}" r="${fmt(r)}" fill="${fill}"/>`);
  }

  rect(x: number, y: number, w: number, h: number, fill: string, opts = "") {
    this.add(
      `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" fill="${fill}" ${opts}/>`,
    );
  }

  text(x: number, y: number, content: string, opts = "") {
    this.add(`<text x="${fmt(x)}" y="${fmt(y)}" ${opts}>${escapeXml(content)}</text>`);
  }

  render(): string {
    return [
      `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" height="${this.height}" viewBox="0 0 ${this.width} ${this.height}" font-family="Helvetica, Arial, sans-serif" font-size="12">`,
      `<rect width="${this.width}" height="${this.height}" fill="white"/>`,
      ...this.parts,
      "</svg>",
      "",
    ].join("\n");
  }
}

function escapeXml(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export interface AxesOptions {
  xLabel: string;
  yLabel: string;
  title?: string;
}

export function drawAxes(svg: Svg, m: Margins, xs: Scale, ys: Scale, opts: AxesOptions) {
  const x0 = m.left;
  const x1 = svg.width - m.right;
  const y0 = svg.height - m.bottom;
  const y1 = m.top;
  svg.line(x0, y0, x1, y0, "black");
  svg.line(x0, y0, x0, y1, "black");
  for (const t of xs.ticks()) {
    const px = xs.apply(t);
    if (px < x0 - 1e-6 || px > x1 + 1e-6) continue;
    svg.line(px, y0, px, y0 + 5, "black");
    svg.text(px, y0 + 18, fmt(t), `text-anchor="middle"`);
  }
  for (const t of ys.ticks()) {
    const py = ys.apply(t);
    if (py > y0 + 1e-6 || py < y1 - 1e-6) continue;
    svg.line(x0 - 5, py, x0, py, "black");
    svg.text(x0 - 8, py + 4, fmt(t), `text-anchor="end"`);
    svg.line(x0, py, x1, py, "#dddddd", `stroke-dasharray="2,4"`);
  }
  svg.text((x0 + x1) / 2, svg.height - 8, opts.xLabel, `text-anchor="middle"`);
  svg.text(14, (y0 + y1) / 2, opts.yLabel, `text-anchor="middle" transform="rotate(-90 14 ${fmt((y0 + y1) / 2)})"`);
  if (opts.title) {
    svg.text((x0 + x1) / 2, m.top - 8, opts.title, `text-anchor="middle" font-size="14"`);
  }
}

export function drawLegend(svg: Svg, m: Margins, entries: { label: string; color: string; dash?: string }[]) {
  const x = svg.width - m.right - 150;
  let y = m.top + 14;
  for (const e of entries) {
    svg.line(x, y - 4, x + 22, y - 4, e.color, e.dash ? `stroke-dasharray="${e.dash}" stroke-width="2"` : `stroke-width="2"`);
    svg.text(x + 28, y, e.label);
    y += 16;
  }
}
