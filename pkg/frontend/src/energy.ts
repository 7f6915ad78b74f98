/** Energy-density panels: per-channel densities and their sum over x at the
 * selected times, read from the long-format energy export. */
import { column, distinct, readCsv, requireColumns, SchemaError, Table } from "./csv.js";
import { linear, Svg } from "./svg.js";

export interface EnergySlice {
  t: number;
  x: number[];
  epsU: number[];
  epsV: number[];
  epsTotal: number[];
}

export function loadEnergy(energyCsv: string): EnergySlice[] {
  const t: Table = readCsv(energyCsv);
  requireColumns(t, ["t", "x", "eps_u", "eps_v", "eps_total"]);
  const times = column(t, "t");
  const xs = column(t, "x");
  const eu = column(t, "eps_u");
  const ev = column(t, "eps_v");
  const et = column(t, "eps_total");
  const slices: EnergySlice[] = [];
  for (const tv of distinct(times)) {
    const idx = times.map((v, i) => i).filter((i) => times[i] === tv);
    slices.push({
      t: tv,
      x: idx.map((i) => xs[i]),
      epsU: idx.map((i) => eu[i]),
      epsV: idx.map((i) => ev[i]),
      epsTotal: idx.map((i) => et[i]),
    });
  }
  if (slices.length === 0) throw new SchemaError("no time slices in energy export");
  return slices;
}

/** Nearest slice to the requested time. */
export function sliceAt(slices: EnergySlice[], t: number): EnergySlice {
  let best = slices[0];
  for (const s of slices) if (Math.abs(s.t - t) < Math.abs(best.t - t)) best = s;
  return best;
}

export function maxSliceDifference(a: EnergySlice, b: EnergySlice, key: "epsU" | "epsV" | "epsTotal"): number {
  let worst = 0;
  for (let i = 0; i < a.x.length; i++) worst = Math.max(worst, Math.abs(a[key][i] - b[key][i]));
  return worst;
}

export function renderEnergy(slices: EnergySlice[]): string {
  const panelW = 280;
  const panelH = 200;
  const cols = Math.min(4, Math.max(1, slices.length));
  const rows = Math.ceil(slices.length / cols);
  const W = panelW * cols;
  const H = panelH * rows + 20;
  const svg = new Svg(W, H);
  svg.rect(0, 0, W, H, "#ffffff");
  let lo = Infinity;
  let hi = -Infinity;
  for (const s of slices) {
    for (const arr of [s.epsU, s.epsV, s.epsTotal]) {
      for (const v of arr) {
        lo = Math.min(lo, v);
        hi = Math.max(hi, v);
      }
    }
  }
  const pad = 0.05 * (hi - lo || 1);
  slices.forEach((s, idx) => {
    const ox = (idx % cols) * panelW;
    const oy = Math.floor(idx / cols) * panelH + 16;
    const xs = linear(s.x[0], s.x[s.x.length - 1], ox + 44, ox + panelW - 12);
    const ys = linear(lo - pad, hi + pad, oy + panelH - 34, oy + 10);
    svg.line(xs(s.x[0]), ys(0), xs(s.x[s.x.length - 1]), ys(0), "#ccc", 1);
    const mk = (arr: number[], color: string, width: number) =>
      svg.polyline(arr.map((v, i) => [xs(s.x[i]), ys(v)] as [number, number]), color, width);
    mk(s.epsTotal, "#222222", 2.0);
    mk(s.epsU, "#c0392b", 1.3);
    mk(s.epsV, "#2166c0", 1.3);
    svg.text(ox + panelW / 2, oy + 6, `t = ${s.t.toFixed(3)}`, 11, "middle");
  });
  svg.text(8, 12, "energy density: total (black), first channel (red), second channel (blue)", 11);
  return svg.render();
}
