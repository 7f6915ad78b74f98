/** Minimal SVG emission: linear scales, polylines, guides, text. */

export interface Scale {
  (v: number): number;
}

export function linear(d0: number, d1: number, r0: number, r1: number): Scale {
  const k = (r1 - r0) / (d1 - d0 || 1);
  return (v: number) => r0 + (v - d0) * k;
}

export class Svg {
  private parts: string[] = [];
  constructor(readonly width: number, readonly height: number) {}

  rect(x: number, y: number, w: number, h: number, fill: string): void {
    this.parts.push(`<rect x="${f(x)}" y="${f(y)}" width="${f(w)}" height="${f(h)}" fill="${fill}"/>`);
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke: string, width = 1, dash = ""): void {
    const d = dash ? ` stroke-dasharray="${dash}"` : "";
    this.parts.push(
      `<line x1="${f(x1)}" y1="${f(y1)}" x2="${f(x2)}" y2="${f(y2)}" stroke="${stroke}" stroke-width="${width}"${d}/>`,
    );
  }

  polyline(pts: Array<[number, number]>, stroke: string, width = 1.2, opacity = 1): void {
    const p = pts.map(([x, y]) => `${f(x)},${f(y)}`).join(" ");
    this.parts.push(
      `<polyline points="${p}" fill="none" stroke="${stroke}" stroke-width="${width}" stroke-opacity="${opacity}"/>`,
    );
  }

  /** Polyline with per-segment colors (used for position-colored curves). */
  coloredPath(pts: Array<[number, number]>, colors: string[], width = 1.6): void {
    for (let i = 0; i + 1 < pts.length; i++) {
      this.line(pts[i][0], pts[i][1], pts[i + 1][0], pts[i + 1][1], colors[i], width);
    }
  }

  circle(x: number, y: number, r: number, fill: string, stroke = "none"): void {
    this.parts.push(`<circle cx="${f(x)}" cy="${f(y)}" r="${f(r)}" fill="${fill}" stroke="${stroke}"/>`);
  }

  text(x: number, y: number, s: string, size = 11, anchor = "start", fill = "#222"): void {
    this.parts.push(
      `<text x="${f(x)}" y="${f(y)}" font-size="${size}" text-anchor="${anchor}" fill="${fill}" font-family="sans-serif">${esc(s)}</text>`,
    );
  }

  render(): string {
    return (
      `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" height="${this.height}" ` +
      `viewBox="0 0 ${this.width} ${this.height}">\n` +
      this.parts.join("\n") +
      "\n</svg>\n"
    );
  }
}

function f(v: number): string {
  return Number.isFinite(v) ? v.toFixed(2) : "0";
}

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

/** Blue-to-red colormap over [0, 1] for position coloring. */
export function rainbow(t: number): string {
  const clamped = Math.min(1, Math.max(0, t));
  const h = 240 - 240 * clamped; // blue -> red
  return `hsl(${h.toFixed(0)},85%,45%)`;
}
