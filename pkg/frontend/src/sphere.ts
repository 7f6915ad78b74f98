/** Sphere-curve figure: the first spin density as a closed curve on the unit
 * sphere, one panel per exported time, colored by position x. */
import { column, readCsv, requireColumns, SchemaError, Table } from "./csv.js";
import { rainbow, Svg } from "./svg.js";

export interface SphereCurve {
  label: string;
  u: Array<[number, number, number]>;
  x: number[];
  maxLengthDefect: number;
}

export function loadFieldCurve(fieldsCsv: string, label: string): SphereCurve {
  const t: Table = readCsv(fieldsCsv);
  requireColumns(t, ["x", "u1_re", "u2_re", "u3_re", "u1_im", "u2_im", "u3_im"]);
  if (t.rows.length === 0) throw new SchemaError("empty field sample");
  const x = column(t, "x");
  const u1 = column(t, "u1_re");
  const u2 = column(t, "u2_re");
  const u3 = column(t, "u3_re");
  let defect = 0;
  const u: Array<[number, number, number]> = x.map((_, i) => {
    const v: [number, number, number] = [u1[i], u2[i], u3[i]];
    defect = Math.max(defect, Math.abs(Math.hypot(...v) - 1));
    return v;
  });
  return { label, u, x, maxLengthDefect: defect };
}

/** Orthographic projection with a fixed tilt so all three axes are visible. */
function project(v: [number, number, number]): [number, number] {
  const [X, Y, Z] = v;
  const a = (35 * Math.PI) / 180;
  const b = (25 * Math.PI) / 180;
  const x1 = X * Math.cos(a) + Y * Math.sin(a);
  const y1 = -X * Math.sin(a) * Math.sin(b) + Y * Math.cos(a) * Math.sin(b) + Z * Math.cos(b);
  return [x1, y1];
}

export function renderSphere(curves: SphereCurve[]): string {
  const panel = 220;
  const cols = Math.min(4, Math.max(1, curves.length));
  const rows = Math.ceil(curves.length / cols);
  const W = panel * cols;
  const H = panel * rows + 16;
  const svg = new Svg(W, H);
  svg.rect(0, 0, W, H, "#ffffff");
  curves.forEach((c, idx) => {
    const cx = (idx % cols) * panel + panel / 2;
    const cy = Math.floor(idx / cols) * panel + panel / 2 + 12;
    const R = panel * 0.38;
    svg.circle(cx, cy, R, "none", "#bbb");
    const pts: Array<[number, number]> = c.u.map((v) => {
      const [px, py] = project(v);
      return [cx + R * px, cy - R * py];
    });
    pts.push(pts[0]); // periodic closure
    const colors = c.x.map((xv, i) => rainbow(i / Math.max(1, c.x.length - 1)));
    svg.coloredPath(pts, colors, 1.8);
    svg.text(cx, cy - R - 8, c.label, 11, "middle");
  });
  return svg.render();
}
