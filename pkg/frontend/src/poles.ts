/** Pole-trajectory figure: traces of each upper-family pole in the strip,
 * with guides at the admissibility boundaries delta/2 and 3*delta/2. */
import { readFileSync } from "fs";
import { column, readCsv, SchemaError, Table } from "./csv.js";
import { linear, Svg } from "./svg.js";

export interface PoleFigureData {
  traces: Array<{ re: number[]; im: number[] }>;
  delta: number;
  ell: number;
}

export function loadPoleData(trajectoryCsv: string, initialStateJson: string): PoleFigureData {
  const t: Table = readCsv(trajectoryCsv);
  if (t.rows.length === 0) throw new SchemaError("empty trajectory");
  const params = JSON.parse(readFileSync(initialStateJson, "utf8"));
  if (typeof params.delta !== "number" || typeof params.ell !== "number") {
    throw new SchemaError("initial state JSON lacks ell/delta");
  }
  const traces: PoleFigureData["traces"] = [];
  for (let j = 1; ; j++) {
    if (t.header.indexOf(`a${j}_re`) < 0) break;
    traces.push({ re: column(t, `a${j}_re`), im: column(t, `a${j}_im`) });
  }
  if (traces.length === 0) throw new SchemaError("no pole columns a{j}_re in trajectory");
  return { traces, delta: params.delta, ell: params.ell };
}

const COLORS = ["#3366cc", "#8e44ad", "#d4a017", "#2e9e4f", "#c0392b", "#16a085", "#7f8c8d", "#d35400"];

export function renderPoles(data: PoleFigureData): string {
  const W = 520;
  const H = 420;
  const m = { l: 64, r: 20, t: 28, b: 44 };
  const svg = new Svg(W, H);
  svg.rect(0, 0, W, H, "#ffffff");
  const xs = linear(-data.ell, data.ell, m.l, W - m.r);
  const ys = linear(0, 2 * data.delta, H - m.b, m.t);

  // admissibility guides
  for (const [level, label] of [
    [data.delta / 2, "delta/2"],
    [(3 * data.delta) / 2, "3 delta/2"],
  ] as Array<[number, string]>) {
    svg.line(xs(-data.ell), ys(level), xs(data.ell), ys(level), "#999", 1, "5,4");
    svg.text(xs(-data.ell) - 4, ys(level) + 4, label, 10, "end");
  }

  data.traces.forEach((tr, i) => {
    const pts: Array<[number, number]> = tr.re.map((re, k) => [xs(re), ys(tr.im[k])]);
    svg.polyline(pts, COLORS[i % COLORS.length], 1.6, 0.8);
    svg.circle(pts[0][0], pts[0][1], 4, COLORS[i % COLORS.length]);
  });

  svg.line(xs(-data.ell), ys(0), xs(data.ell), ys(0), "#222", 1);
  svg.text(W / 2, H - 10, "Re a", 12, "middle");
  svg.text(16, H / 2, "Im a", 12, "middle");
  svg.text(W / 2, 16, "pole trajectories (dots mark t = 0)", 12, "middle");
  return svg.render();
}
