/**
 * The four figure kinds rendered from harness exports:
 *
 *  - failure-curve: logical failure rate vs physical rate, one series per
 *    (code, distance), +-1 sigma error bars, optional analytic overlay
 *    and threshold marker
 *  - sweep: class probabilities vs error rate from one decoded syndrome
 *  - histogram: unique-chain counts per weight and class
 *  - time-scaling: median/95th-percentile attempt counts vs distance with
 *    a d^5 guide line
 */

import {
  FailureRow,
  OverlayRow,
  SchemaError,
  SweepRow,
  HistogramRow,
  TimeToLightRow,
  percentile,
  readFailureCsv,
  readHistogramCsv,
  readOverlayCsv,
  readSweepCsv,
  readTimeToLightCsv,
} from "./schema.js";
import { Margins, PALETTE, ScaleKind, Svg, drawAxes, drawLegend, fmt, makeScale } from "./svg.js";

export type FigureKind = "failure-curve" | "sweep" | "histogram" | "time-scaling";

export interface PlotSpec {
  kind: FigureKind;
  inputs: string[];
  out: string;
  overlay?: string;
  threshold?: number;
  xscale?: ScaleKind;
  yscale?: ScaleKind;
  title?: string;
}

const MARGINS: Margins = { left: 64, right: 24, top: 36, bottom: 48 };

function frame(svg: Svg): { x0: number; x1: number; y0: number; y1: number } {
  return {
    x0: MARGINS.left,
    x1: svg.width - MARGINS.right,
    y0: svg.height - MARGINS.bottom,
    y1: MARGINS.top,
  };
}

export function renderFigure(spec: PlotSpec): string {
  if (spec.inputs.length === 0) {
    throw new SchemaError("no input files given");
  }
  switch (spec.kind) {
    case "failure-curve":
      return failureCurve(spec);
    case "sweep":
      return sweepFigure(spec);
    case "histogram":
      return histogramFigure(spec);
    case "time-scaling":
      return timeScalingFigure(spec);
    default:
      throw new SchemaError(`unknown figure kind ${JSON.stringify(spec.kind)}`);
  }
}

function failureCurve(spec: PlotSpec): string {
  const rows: FailureRow[] = spec.inputs.flatMap(readFailureCsv);
  const overlay: OverlayRow[] = spec.overlay ? readOverlayCsv(spec.overlay) : [];

  const series = new Map<string, FailureRow[]>();
  for (const r of rows) {
    const key = `${r.code} d=${r.d}`;
    if (!series.has(key)) series.set(key, []);
    series.get(key)!.push(r);
  }
  for (const pts of series.values()) pts.sort((a, b) => a.p - b.p);

  const yscale: ScaleKind = spec.yscale ?? "log";
  const ys = rows
    .flatMap((r) => [r.p_fail - r.sigma, r.p_fail + r.sigma])
    .concat(overlay.map((o) => o.p_fail))
    .filter((v) => (yscale === "log" ? v > 0 : true));
  if (ys.length === 0) {
    throw new SchemaError("no positive failure rates to draw on a log axis");
  }
  const xsAll = rows.map((r) => r.p).concat(overlay.map((o) => o.p));

  const svg = new Svg();
  const f = frame(svg);
  const xs = makeScale(spec.xscale ?? "linear", [Math.min(...xsAll), Math.max(...xsAll)], [f.x0, f.x1]);
  const sy = makeScale(yscale, [Math.min(...ys), Math.max(...ys)], [f.y0, f.y1]);
  drawAxes(svg, MARGINS, xs, sy, {
    xLabel: "physical error rate p",
    yLabel: "logical failure rate",
    title: spec.title ?? "logical failure rate",
  });

  if (spec.threshold !== undefined) {
    const px = xs.apply(spec.threshold);
    svg.line(px, f.y0, px, f.y1, "#555555", `stroke-dasharray="6,4"`);
    svg.text(px + 4, f.y1 + 12, `p_th=${fmt(spec.threshold)}`);
  }

  if (overlay.length > 0) {
    const pts = overlay
      .slice()
      .sort((a, b) => a.p - b.p)
      .filter((o) => yscale !== "log" || o.p_fail > 0)
      .map((o) => [xs.apply(o.p), sy.apply(o.p_fail)] as [number, number]);
    svg.polyline(pts, "black", `stroke-width="1.5" stroke-dasharray="8,4"`);
  }

  const legend: { label: string; color: string; dash?: string }[] = [];
  let ci = 0;
  for (const [label, pts] of [...series.entries()].sort()) {
    const color = PALETTE[ci % PALETTE.length];
    ci += 1;
    const drawable = pts.filter((r) => yscale !== "log" || r.p_fail > 0);
    svg.polyline(
      drawable.map((r) => [xs.apply(r.p), sy.apply(r.p_fail)]),
      color,
      `stroke-width="1.5"`,
    );
    for (const r of drawable) {
      const px = xs.apply(r.p);
      svg.circle(px, sy.apply(r.p_fail), 2.5, color);
      const lo = r.p_fail - r.sigma;
      const hi = r.p_fail + r.sigma;
      if (yscale === "log" && lo <= 0) continue;
      svg.line(px, sy.apply(lo), px, sy.apply(hi), color);
      svg.line(px - 3, sy.apply(lo), px + 3, sy.apply(lo), color);
      svg.line(px - 3, sy.apply(hi), px + 3, sy.apply(hi), color);
    }
    legend.push({ label, color });
  }
  if (overlay.length > 0) legend.push({ label: "analytic", color: "black", dash: "8,4" });
  drawLegend(svg, MARGINS, legend);
  return svg.render();
}

const CLASS_COLORS: Record<string, string> = {
  I: PALETTE[0],
  X: PALETTE[1],
  Z: PALETTE[2],
  Y: PALETTE[3],
};

function sweepFigure(spec: PlotSpec): string {
  const rows: SweepRow[] = spec.inputs.flatMap(readSweepCsv);
  rows.sort((a, b) => a.p - b.p);

  const svg = new Svg();
  const f = frame(svg);
  const xs = makeScale(
    spec.xscale ?? "linear",
    [rows[0].p, rows[rows.length - 1].p],
    [f.x0, f.x1],
  );
  const sy = makeScale(spec.yscale ?? "linear", [0, 1], [f.y0, f.y1]);
  drawAxes(svg, MARGINS, xs, sy, {
    xLabel: "physical error rate p",
    yLabel: "class probability",
    title: spec.title ?? "equivalence-class probabilities",
  });

  const legend: { label: string; color: string; dash?: string }[] = [];
  for (const c of ["I", "X", "Z", "Y"]) {
    const color = CLASS_COLORS[c];
    svg.polyline(
      rows.map((r) => [xs.apply(r.p), sy.apply(r.ewd[c])]),
      color,
      `stroke-width="1.5"`,
    );
    svg.polyline(
      rows.map((r) => [xs.apply(r.p), sy.apply(r.all[c])]),
      color,
      `stroke-width="1.2" stroke-dasharray="5,3"`,
    );
    legend.push({ label: `${c} (lightest)`, color });
    legend.push({ label: `${c} (all)`, color, dash: "5,3" });
  }
  drawLegend(svg, MARGINS, legend);
  return svg.render();
}

function histogramFigure(spec: PlotSpec): string {
  const rows: HistogramRow[] = spec.inputs.flatMap(readHistogramCsv);
  const weights = [...new Set(rows.map((r) => r.w))].sort((a, b) => a - b);
  const classes = ["I", "X", "Z", "Y"];
  const maxCount = Math.max(...rows.map((r) => r.count));

  const svg = new Svg();
  const f = frame(svg);
  const sy = makeScale(spec.yscale ?? "linear", [0, maxCount], [f.y0, f.y1]);
  const xs = makeScale("linear", [0, weights.length], [f.x0, f.x1]);
  drawAxes(svg, MARGINS, xs, sy, {
    xLabel: "effective weight w (binned)",
    yLabel: "unique chains",
    title: spec.title ?? "unique chains by weight and class",
  });

  const groupWidth = (f.x1 - f.x0) / Math.max(1, weights.length);
  const barWidth = (groupWidth * 0.8) / classes.length;
  const byKey = new Map(rows.map((r) => [`${r.className}@${r.w}`, r.count]));
  weights.forEach((w, wi) => {
    classes.forEach((c, cj) => {
      const count = byKey.get(`${c}@${w}`) ?? 0;
      if (count === 0) return;
      const x = f.x0 + wi * groupWidth + groupWidth * 0.1 + cj * barWidth;
      const y = sy.apply(count);
      svg.rect(x, y, barWidth, f.y0 - y, CLASS_COLORS[c]);
    });
    svg.text(f.x0 + (wi + 0.5) * groupWidth, f.y0 + 18, fmt(w), `text-anchor="middle"`);
  });
  drawLegend(
    svg,
    MARGINS,
    classes.map((c) => ({ label: c, color: CLASS_COLORS[c] })),
  );
  return svg.render();
}

function timeScalingFigure(spec: PlotSpec): string {
  const rows: TimeToLightRow[] = spec.inputs.flatMap(readTimeToLightCsv);
  const byD = new Map<number, number[]>();
  for (const r of rows) {
    if (!byD.has(r.d)) byD.set(r.d, []);
    byD.get(r.d)!.push(r.steps);
  }
  const ds = [...byD.keys()].sort((a, b) => a - b);
  const p50 = ds.map((d) => percentile(byD.get(d)!, 50));
  const p95 = ds.map((d) => percentile(byD.get(d)!, 95));
  const finite = p50.concat(p95).filter((v) => Number.isFinite(v) && v > 0);
  if (finite.length === 0) {
    throw new SchemaError("no finite percentiles; every instance exhausted its budget");
  }

  const svg = new Svg();
  const f = frame(svg);
  const xs = makeScale(spec.xscale ?? "log", [Math.min(...ds), Math.max(...ds)], [f.x0, f.x1]);
  const sy = makeScale(
    spec.yscale ?? "log",
    [Math.min(...finite), Math.max(...finite)],
    [f.y0, f.y1],
  );
  drawAxes(svg, MARGINS, xs, sy, {
    xLabel: "code distance d",
    yLabel: "Metropolis attempts to lightest chain",
    title: spec.title ?? "time to lightest chain",
  });

  // d^5 guide anchored at the first median
  const guide = ds
    .map((d) => [xs.apply(d), sy.apply(p50[0] * (d / ds[0]) ** 5)] as [number, number]);
  svg.polyline(guide, "#999999", `stroke-dasharray="6,4"`);

  const seriesData: [string, number[]][] = [
    ["median", p50],
    ["95th percentile", p95],
  ];
  seriesData.forEach(([label, vals], i) => {
    const color = PALETTE[i];
    const pts = ds
      .map((d, k) => [d, vals[k]] as [number, number])
      .filter(([, v]) => Number.isFinite(v));
    svg.polyline(pts.map(([d, v]) => [xs.apply(d), sy.apply(v)]), color, `stroke-width="1.5"`);
    for (const [d, v] of pts) svg.circle(xs.apply(d), sy.apply(v), 3, color);
  });
  drawLegend(svg, MARGINS, [
    { label: "median", color: PALETTE[0] },
    { label: "95th percentile", color: PALETTE[1] },
    { label: "d^5 guide", color: "#999999", dash: "6,4" },
  ]);
  return svg.render();
}
