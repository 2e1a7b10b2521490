/** Minimal SVG chart builder; no DOM required. */

export interface ChartOptions {
  width: number;
  height: number;
  title: string;
  xLabel: string;
  yLabel: string;
  metadata?: Record<string, string | number>;
}

const MARGIN = { top: 44, right: 24, bottom: 48, left: 62 };

export const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                        "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"];

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function ticks(lo: number, hi: number, count: number): number[] {
  if (!(hi > lo)) return [lo];
  const span = hi - lo;
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const err = span / (count * step);
  const mult = err >= 7.5 ? 10 : err >= 3 ? 5 : err >= 1.5 ? 2 : 1;
  const s = step * mult;
  const out: number[] = [];
  for (let v = Math.ceil(lo / s) * s; v <= hi + 1e-12 * span; v += s) {
    out.push(Math.abs(v) < 1e-12 * span ? 0 : v);
  }
  return out;
}

const fmt = (v: number): string =>
  Math.abs(v) >= 1000 || (v !== 0 && Math.abs(v) < 0.01)
    ? v.toExponential(1)
    : String(Math.round(v * 1000) / 1000);

export class Chart {
  private readonly parts: string[] = [];
  private readonly legend: { label: string; color: string; dashed: boolean }[] = [];
  readonly x0: number; readonly x1: number;
  readonly y0: number; readonly y1: number;

  constructor(
    private readonly opts: ChartOptions,
    private xRange: [number, number],
    private yRange: [number, number],
  ) {
    this.x0 = MARGIN.left;
    this.x1 = opts.width - MARGIN.right;
    this.y0 = opts.height - MARGIN.bottom;
    this.y1 = MARGIN.top;
    if (this.xRange[0] === this.xRange[1]) this.xRange = [this.xRange[0] - 1, this.xRange[1] + 1];
    if (this.yRange[0] === this.yRange[1]) this.yRange = [this.yRange[0] - 1, this.yRange[1] + 1];
  }

  sx(v: number): number {
    const [lo, hi] = this.xRange;
    return this.x0 + ((v - lo) / (hi - lo)) * (this.x1 - this.x0);
  }

  sy(v: number): number {
    const [lo, hi] = this.yRange;
    return this.y0 - ((v - lo) / (hi - lo)) * (this.y0 - this.y1);
  }

  line(points: [number, number][], color: string, dashed = false, width = 1.8): void {
    if (points.length === 0) return;
    const d = points
      .map(([x, y], i) => `${i ? "L" : "M"}${this.sx(x).toFixed(2)},${this.sy(y).toFixed(2)}`)
      .join(" ");
    const dash = dashed ? ' stroke-dasharray="6 4"' : "";
    this.parts.push(
      `<path d="${d}" fill="none" stroke="${color}" stroke-width="${width}"${dash}/>`,
    );
  }

  dots(points: [number, number][], color: string, r = 2.2): void {
    for (const [x, y] of points) {
      this.parts.push(
        `<circle cx="${this.sx(x).toFixed(2)}" cy="${this.sy(y).toFixed(2)}" ` +
        `r="${r}" fill="${color}" fill-opacity="0.45"/>`,
      );
    }
  }

  addLegend(label: string, color: string, dashed = false): void {
    if (!this.legend.some((e) => e.label === label)) {
      this.legend.push({ label, color, dashed });
    }
  }

  render(): string {
    const { width, height, title, xLabel, yLabel, metadata } = this.opts;
    const out: string[] = [];
    out.push(
      `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}" font-family="sans-serif">`,
    );
    if (metadata) {
      const body = Object.entries(metadata)
        .map(([k, v]) => `${esc(k)}=${esc(String(v))}`)
        .join(" ");
      out.push(`<metadata>${body}</metadata>`);
    }
    out.push(`<rect width="${width}" height="${height}" fill="white"/>`);
    out.push(`<text x="${width / 2}" y="22" text-anchor="middle" font-size="14">${esc(title)}</text>`);

    for (const t of ticks(this.xRange[0], this.xRange[1], 7)) {
      const x = this.sx(t).toFixed(2);
      out.push(`<line x1="${x}" y1="${this.y1}" x2="${x}" y2="${this.y0}" stroke="#eee"/>`);
      out.push(`<text x="${x}" y="${this.y0 + 18}" text-anchor="middle" font-size="10">${fmt(t)}</text>`);
    }
    for (const t of ticks(this.yRange[0], this.yRange[1], 6)) {
      const y = this.sy(t).toFixed(2);
      out.push(`<line x1="${this.x0}" y1="${y}" x2="${this.x1}" y2="${y}" stroke="#eee"/>`);
      out.push(`<text x="${this.x0 - 6}" y="${y}" text-anchor="end" dominant-baseline="middle" font-size="10">${fmt(t)}</text>`);
    }
    out.push(`<line x1="${this.x0}" y1="${this.y0}" x2="${this.x1}" y2="${this.y0}" stroke="#333"/>`);
    out.push(`<line x1="${this.x0}" y1="${this.y0}" x2="${this.x0}" y2="${this.y1}" stroke="#333"/>`);
    out.push(`<text x="${(this.x0 + this.x1) / 2}" y="${this.opts.height - 10}" text-anchor="middle" font-size="12">${esc(xLabel)}</text>`);
    out.push(`<text x="16" y="${(this.y0 + this.y1) / 2}" text-anchor="middle" font-size="12" transform="rotate(-90 16 ${(this.y0 + this.y1) / 2})">${esc(yLabel)}</text>`);

    out.push(...this.parts);

    this.legend.forEach((entry, i) => {
      const y = this.y1 + 14 + i * 16;
      const x = this.x1 - 130;
      const dash = entry.dashed ? ' stroke-dasharray="6 4"' : "";
      out.push(`<line x1="${x}" y1="${y}" x2="${x + 22}" y2="${y}" stroke="${entry.color}" stroke-width="2"${dash}/>`);
      out.push(`<text x="${x + 28}" y="${y + 3.5}" font-size="11">${esc(entry.label)}</text>`);
    });

    out.push("</svg>");
    return out.join("\n");
  }
}

export function extent(values: number[]): [number, number] {
  let lo = Infinity, hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  return [lo, hi];
}
