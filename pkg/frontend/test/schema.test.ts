import { describe, expect, it } from "vitest";
import { mkdtempSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";

import {
  SchemaError,
  percentile,
  readFailureCsv,
  readHistogramCsv,
  readOverlayCsv,
  readSweepCsv,
  readTimeToLightCsv,
} from "../src/schema.js";

const FIX = join(__dirname, "fixtures");

function tempCsv(content: string): string {
  const dir = mkdtempSync(join(tmpdir(), "figtest-"));
  const path = join(dir, "data.csv");
  writeFileSync(path, content);
  return path;
}

describe("failure csv", () => {
  it("reads the harness export", () => {
    const rows = readFailureCsv(join(FIX, "failure.csv"));
    expect(rows.length).toBe(6);
    expect(rows[0].decoder).toBe("ewd");
    expect(rows[0].n).toBe(400);
    expect(rows[0].p_fail).toBeCloseTo(rows[0].failures / rows[0].n, 12);
  });

  it("rejects a missing column", () => {
    const path = tempCsv("decoder,code,d,p\newd,xzzx,3,0.1\n");
    expect(() => readFailureCsv(path)).toThrow(SchemaError);
    expect(() => readFailureCsv(path)).toThrow(/missing required columns/);
  });

  it("rejects an empty file", () => {
    const path = tempCsv("decoder,code,d,p,alpha_x,alpha_y,n,failures,p_fail,sigma,seed\n");
    expect(() => readFailureCsv(path)).toThrow(/no data rows/);
  });

  it("rejects a sigma that violates the binomial formula", () => {
    const path = tempCsv(
      "decoder,code,d,p,alpha_x,alpha_y,n,failures,p_fail,sigma,seed\n" +
        "ewd,xzzx,3,0.1,1.0,1.0,400,46,0.115,0.5,77\n",
    );
    expect(() => readFailureCsv(path)).toThrow(/binomial/);
  });

  it("rejects an inconsistent p_fail", () => {
    const path = tempCsv(
      "decoder,code,d,p,alpha_x,alpha_y,n,failures,p_fail,sigma,seed\n" +
        "ewd,xzzx,3,0.1,1.0,1.0,400,46,0.2,0.01595109714094927,77\n",
    );
    expect(() => readFailureCsv(path)).toThrow(/p_fail/);
  });

  it("rejects malformed numbers", () => {
    const path = tempCsv(
      "decoder,code,d,p,alpha_x,alpha_y,n,failures,p_fail,sigma,seed\n" +
        "ewd,xzzx,3,oops,1.0,1.0,400,46,0.115,0.01595109714094927,77\n",
    );
    expect(() => readFailureCsv(path)).toThrow(/bad numeric value/);
  });
});

describe("sweep csv", () => {
  it("reads and checks normalization", () => {
    const rows = readSweepCsv(join(FIX, "sweep.csv"));
    expect(rows.length).toBe(12);
    for (const row of rows) {
      const total = Object.values(row.ewd).reduce((a, b) => a + b, 0);
      expect(total).toBeCloseTo(1, 9);
    }
  });

  it("rejects probabilities that do not sum to one", () => {
    const path = tempCsv(
      "p,ewd_I,ewd_X,ewd_Z,ewd_Y,all_I,all_X,all_Z,all_Y\n" +
        "0.1,0.5,0.1,0.1,0.1,0.25,0.25,0.25,0.25\n",
    );
    expect(() => readSweepCsv(path)).toThrow(/sum to/);
  });
});

describe("histogram csv", () => {
  it("reads classes and weights", () => {
    const rows = readHistogramCsv(join(FIX, "hist.csv"));
    expect(rows.length).toBeGreaterThan(4);
    expect(new Set(rows.map((r) => r.className)).size).toBeGreaterThanOrEqual(4);
  });

  it("rejects unknown class names", () => {
    const path = tempCsv("class,w,count\nQ,1.0,3\n");
    expect(() => readHistogramCsv(path)).toThrow(/unknown class/);
  });
});

describe("overlay and time-to-light csv", () => {
  it("reads the analytic overlay", () => {
    const rows = readOverlayCsv(join(FIX, "pure_z.csv"));
    expect(rows[0].d).toBe(5);
    expect(rows[1].p_fail).toBeCloseTo(0.00856, 5);
  });

  it("reads step counts and computes percentiles", () => {
    const rows = readTimeToLightCsv(join(FIX, "ttl.csv"));
    expect(rows.length).toBe(40);
    const steps = rows.map((r) => r.steps);
    expect(percentile(steps, 50)).toBeLessThanOrEqual(percentile(steps, 95));
  });

  it("treats exhausted instances as +inf in percentiles", () => {
    expect(percentile([5, -1, 7, -1], 95)).toBe(Infinity);
    expect(percentile([5, -1, 7, 3], 50)).toBe(5);
  });
});
