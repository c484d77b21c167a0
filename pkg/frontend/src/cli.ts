/**
 * Figure rendering CLI.
 *
 * Either point it at a JSON plot spec:
 *   tsx src/cli.ts render --spec spec.json
 * or give everything inline:
 *   tsx src/cli.ts render --kind failure-curve --in results.csv \
 *       --overlay pure_z.csv --threshold 0.182 --out fig.svg
 */

import { parseArgs } from "node:util";
import { readFileSync, writeFileSync } from "fs";
import { FigureKind, PlotSpec, renderFigure } from "./figures.js";
import { SchemaError } from "./schema.js";

const KINDS: FigureKind[] = ["failure-curve", "sweep", "histogram", "time-scaling"];

export function buildSpec(argv: string[]): PlotSpec {
  const { values } = parseArgs({
    args: argv,
    options: {
      spec: { type: "string" },
      kind: { type: "string" },
      in: { type: "string", multiple: true },
      out: { type: "string" },
      overlay: { type: "string" },
      threshold: { type: "string" },
      xscale: { type: "string" },
      yscale: { type: "string" },
      title: { type: "string" },
    },
  });

  let spec: Partial<PlotSpec> = {};
  if (values.spec) {
    spec = JSON.parse(readFileSync(values.spec, "utf-8"));
  }
  if (values.kind) spec.kind = values.kind as FigureKind;
  if (values.in) spec.inputs = values.in;
  if (values.out) spec.out = values.out;
  if (values.overlay) spec.overlay = values.overlay;
  if (values.threshold) spec.threshold = Number(values.threshold);
  if (values.xscale) spec.xscale = values.xscale as PlotSpec["xscale"];
  if (values.yscale) spec.yscale = values.yscale as PlotSpec["yscale"];
  if (values.title) spec.title = values.title;

  if (!spec.kind || !KINDS.includes(spec.kind)) {
    throw new SchemaError(`figure kind must be one of ${KINDS.join(", ")}`);
  }
  if (!spec.inputs || spec.inputs.length === 0) {
    throw new SchemaError("at least one --in file is required");
  }
  if (!spec.out) {
    throw new SchemaError("--out is required");
  }
  return spec as PlotSpec;
}

export function main(argv: string[]): number {
  const [command, ...rest] = argv;
  if (command !== "render") {
    console.error("usage: cli.ts render [--spec spec.json] [--kind ... --in ... --out ...]");
    return 2;
  }
  try {
    const spec = buildSpec(rest);
    const svg = renderFigure(spec);
    writeFileSync(spec.out, svg);
    console.log(`wrote ${spec.out}`);
    return 0;
  } catch (err) {
    if (err instanceof SchemaError || err instanceof Error) {
      console.error(`error: ${err.message}`);
      return 1;
    }
    throw err;
  }
}

if (process.argv[1] && process.argv[1].endsWith("cli.ts")) {
  process.exit(main(process.argv.slice(2)));
}
