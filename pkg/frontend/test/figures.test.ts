import { mkdtempSync, readFileSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";
import { describe, expect, it } from "vitest";

import { column, parseCsv, readCsv, SchemaError } from "../src/csv.js";
import { loadEnergy, maxSliceDifference, renderEnergy, sliceAt } from "../src/energy.js";
import { loadPoleData, renderPoles } from "../src/poles.js";
import { loadFieldCurve, renderSphere } from "../src/sphere.js";
import { run } from "../src/main.js";

const FIX = join(__dirname, "fixtures", "breather");

describe("csv reader", () => {
  it("parses numeric tables", () => {
    const t = parseCsv("a,b\n1,2\n3,4\n");
    expect(t.header).toEqual(["a", "b"]);
    expect(column(t, "b")).toEqual([2, 4]);
  });

  it("rejects ragged rows and missing columns", () => {
    expect(() => parseCsv("a,b\n1\n")).toThrow(SchemaError);
    expect(() => column(parseCsv("a\n1\n"), "zz")).toThrow(SchemaError);
  });
});

describe("pole figure", () => {
  it("draws one trace per pole with strip guides", () => {
    const data = loadPoleData(join(FIX, "trajectory.csv"), join(FIX, "initial_state.json"));
    expect(data.traces.length).toBe(4);
    const svg = renderPoles(data);
    expect(svg).toContain("<svg");
    expect(svg).toContain("delta/2");
    expect((svg.match(/<polyline/g) ?? []).length).toBe(4);
  });

  it("distinguishes stationary and oscillating poles", () => {
    const data = loadPoleData(join(FIX, "trajectory.csv"), join(FIX, "initial_state.json"));
    const spans = data.traces.map((tr) => Math.max(...tr.im) - Math.min(...tr.im));
    const still = spans.filter((s) => s < 1e-6).length;
    const moving = spans.filter((s) => s > 0.5).length;
    expect(still).toBe(2);
    expect(moving).toBe(2);
  });

  it("errors on an empty trajectory instead of writing an empty image", () => {
    const dir = mkdtempSync(join(tmpdir(), "ncihf-"));
    writeFileSync(join(dir, "trajectory.csv"), "t,a1_re,a1_im\n");
    writeFileSync(join(dir, "initial_state.json"), JSON.stringify({ ell: 1, delta: 1 }));
    expect(() => loadPoleData(join(dir, "trajectory.csv"), join(dir, "initial_state.json"))).toThrow(SchemaError);
  });
});

describe("sphere figure", () => {
  it("curves sit on the unit sphere (flatline |u| = 1)", () => {
    const c = loadFieldCurve(join(FIX, "fields_t0.0000.csv"), "t = 0");
    expect(c.maxLengthDefect).toBeLessThan(1e-9);
    const svg = renderSphere([c]);
    expect(svg).toContain("<svg");
    expect((svg.match(/<line/g) ?? []).length).toBeGreaterThan(100);
  });

  it("renders the kink-time panel", () => {
    const c = loadFieldCurve(join(FIX, "fields_t2.9579.csv"), "t = T/4");
    expect(c.maxLengthDefect).toBeLessThan(1e-6);
    expect(renderSphere([c])).toContain("t = T/4");
  });
});

describe("energy figure", () => {
  const slices = loadEnergy(join(FIX, "energy.csv"));

  it("total energy density repeats after half the pole period", () => {
    const t0 = slices[0].t;
    const T = slices[slices.length - 1].t - t0;
    for (const frac of [0, 0.1, 0.25]) {
      const a = sliceAt(slices, t0 + frac * T);
      const b = sliceAt(slices, t0 + frac * T + T / 2);
      expect(Math.abs(a.t + T / 2 - b.t)).toBeLessThan(1e-9); // exact grid pairing
      expect(maxSliceDifference(a, b, "epsTotal")).toBeLessThan(1e-6);
    }
  });

  it("channel densities swap rather than repeat at half period", () => {
    const t0 = slices[0].t;
    const T = slices[slices.length - 1].t - t0;
    const a = sliceAt(slices, t0 + 0.1 * T);
    const b = sliceAt(slices, t0 + 0.1 * T + T / 2);
    expect(maxSliceDifference(a, b, "epsU")).toBeGreaterThan(0.1);
    const swapped = { ...b, epsU: b.epsV };
    expect(maxSliceDifference(a, swapped, "epsU")).toBeLessThan(1e-6);
  });

  it("renders four panels by default", () => {
    const svg = renderEnergy([sliceAt(slices, 0), sliceAt(slices, 2.9), sliceAt(slices, 5.9), sliceAt(slices, 8.8)]);
    expect((svg.match(/<polyline/g) ?? []).length).toBe(12); // 3 curves x 4 panels
  });
});

describe("figure CLI", () => {
  it("regenerates all three figures from the breather export", () => {
    const dir = mkdtempSync(join(tmpdir(), "ncihf-fig-"));
    for (const kind of ["poles", "sphere", "energy"]) {
      const out = join(dir, `${kind}.svg`);
      expect(run([kind, "--run", FIX, "--out", out])).toBe(0);
      const content = readFileSync(out, "utf8");
      expect(content.startsWith("<svg")).toBe(true);
      expect(content.length).toBeGreaterThan(500);
    }
  });

  it("fails with a usage error when arguments are missing", () => {
    expect(run(["poles"])).toBe(2);
  });

  it("fails cleanly on a directory without exports", () => {
    const dir = mkdtempSync(join(tmpdir(), "ncihf-empty-"));
    expect(run(["poles", "--run", dir, "--out", join(dir, "x.svg")])).toBe(1);
  });
});
