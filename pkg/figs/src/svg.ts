/**
 * Hand-rolled SVG scenes: linear/log scales, framed panels with ticks,
 * scatter/path/bar marks.  Output is a pure function of the inputs —
 * coordinates are rounded to a fixed precision and nothing touches the
 * clock or RNG — so renders are byte-deterministic.
 */

export type Scale = (value: number) => number;

export function fmt(value: number): string {
  const rounded = Math.round(value * 100) / 100;
  return Object.is(rounded, -0) ? "0" : String(rounded);
}

export function linearScale(
  d0: number, d1: number, r0: number, r1: number): Scale {
  const span = d1 - d0 || 1;
  return (v) => r0 + ((v - d0) / span) * (r1 - r0);
}

export function logScale(
  d0: number, d1: number, r0: number, r1: number): Scale {
  if (d0 <= 0 || d1 <= 0) {
    throw new Error(`log scale needs a positive domain, got [${d0}, ${d1}]`);
  }
  const l0 = Math.log10(d0);
  const span = Math.log10(d1) - l0 || 1;
  return (v) => r0 + ((Math.log10(v) - l0) / span) * (r1 - r0);
}

export function linearTicks(lo: number, hi: number, count = 5): number[] {
  const span = hi - lo || 1;
  const raw = span / Math.max(count - 1, 1);
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const norm = raw / mag;
  const step = (norm >= 5 ? 5 : norm >= 2 ? 2 : 1) * mag;
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + 1e-12 * span; v += step) {
    ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return ticks;
}

export function logTicks(lo: number, hi: number): number[] {
  const ticks: number[] = [];
  for (let e = Math.ceil(Math.log10(lo) - 1e-9);
       e <= Math.floor(Math.log10(hi) + 1e-9); e += 1) {
    ticks.push(Math.pow(10, e));
  }
  if (ticks.length === 0) {
    ticks.push(lo, hi);
  }
  return ticks;
}

function tickLabel(value: number): string {
  if (value === 0) return "0";
  const abs = Math.abs(value);
  if (abs >= 0.01 && abs < 10000) {
    return String(Math.round(value * 1000) / 1000);
  }
  return value.toExponential(0).replace("+", "");
}

export class Svg {
  private parts: string[] = [];

  constructor(readonly width: number, readonly height: number) {}

  add(element: string): void {
    this.parts.push(element);
  }

  text(x: number, y: number, content: string, attrs = ""): void {
    this.add(`<text x="${fmt(x)}" y="${fmt(y)}" ${attrs}>${content}</text>`);
  }

  line(x1: number, y1: number, x2: number, y2: number, attrs: string): void {
    this.add(`<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" ` +
      `y2="${fmt(y2)}" ${attrs}/>`);
  }

  toString(): string {
    return [
      `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" ` +
        `height="${this.height}" viewBox="0 0 ${this.width} ${this.height}" ` +
        `font-family="Helvetica, Arial, sans-serif" font-size="11">`,
      `<rect width="${this.width}" height="${this.height}" fill="white"/>`,
      ...this.parts,
      "</svg>",
    ].join("\n") + "\n";
  }
}

export interface PanelSpec {
  x: number;
  y: number;
  width: number;
  height: number;
  xDomain: [number, number];
  yDomain: [number, number];
  xLog?: boolean;
  yLog?: boolean;
  title?: string;
  xLabel?: string;
  yLabel?: string;
}

export class Panel {
  readonly sx: Scale;
  readonly sy: Scale;

  constructor(private svg: Svg, private spec: PanelSpec) {
    const { x, y, width, height, xDomain, yDomain } = spec;
    this.sx = (spec.xLog ? logScale : linearScale)(
      xDomain[0], xDomain[1], x, x + width);
    this.sy = (spec.yLog ? logScale : linearScale)(
      yDomain[0], yDomain[1], y + height, y);
  }

  frame(): void {
    const { x, y, width, height, title, xLabel, yLabel } = this.spec;
    this.svg.add(`<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(width)}" ` +
      `height="${fmt(height)}" fill="none" stroke="black"/>`);
    if (title) {
      this.svg.text(x + width / 2, y - 6, title,
        'text-anchor="middle" font-weight="bold"');
    }
    if (xLabel) {
      this.svg.text(x + width / 2, y + height + 30, xLabel,
        'text-anchor="middle"');
    }
    if (yLabel) {
      const cx = x - 38;
      const cy = y + height / 2;
      this.svg.text(cx, cy, yLabel,
        `text-anchor="middle" transform="rotate(-90 ${fmt(cx)} ${fmt(cy)})"`);
    }

    const xTicks = this.spec.xLog
      ? logTicks(this.spec.xDomain[0], this.spec.xDomain[1])
      : linearTicks(this.spec.xDomain[0], this.spec.xDomain[1]);
    for (const t of xTicks) {
      const px = this.sx(t);
      this.svg.line(px, y + height, px, y + height + 4, 'stroke="black"');
      this.svg.text(px, y + height + 16, tickLabel(t), 'text-anchor="middle"');
    }
    const yTicks = this.spec.yLog
      ? logTicks(this.spec.yDomain[0], this.spec.yDomain[1])
      : linearTicks(this.spec.yDomain[0], this.spec.yDomain[1]);
    for (const t of yTicks) {
      const py = this.sy(t);
      this.svg.line(x - 4, py, x, py, 'stroke="black"');
      this.svg.text(x - 6, py + 3, tickLabel(t), 'text-anchor="end"');
    }
  }

  scatter(xs: number[], ys: number[], attrs: string, r = 2.4): void {
    for (let i = 0; i < xs.length; i += 1) {
      this.svg.add(`<circle cx="${fmt(this.sx(xs[i]))}" ` +
        `cy="${fmt(this.sy(ys[i]))}" r="${r}" ${attrs}/>`);
    }
  }

  path(xs: number[], ys: number[], attrs: string): void {
    const points = xs.map((x, i) =>
      `${fmt(this.sx(x))},${fmt(this.sy(ys[i]))}`).join(" ");
    this.svg.add(`<polyline points="${points}" fill="none" ${attrs}/>`);
  }

  vbars(los: number[], his: number[], tops: number[], base: number,
        attrs: string): void {
    for (let i = 0; i < los.length; i += 1) {
      const x0 = this.sx(los[i]);
      const x1 = this.sx(his[i]);
      const y1 = this.sy(tops[i]);
      const y0 = this.sy(base);
      this.svg.add(`<rect x="${fmt(x0)}" y="${fmt(Math.min(y0, y1))}" ` +
        `width="${fmt(Math.abs(x1 - x0))}" ` +
        `height="${fmt(Math.abs(y0 - y1))}" ${attrs}/>`);
    }
  }
}

export const SERIES_COLORS = [
  "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

export function padDomain(lo: number, hi: number, log: boolean): [number, number] {
  if (log) {
    return [lo / 1.5, hi * 1.5];
  }
  const pad = (hi - lo || Math.abs(hi) || 1) * 0.06;
  return [lo - pad, hi + pad];
}

export function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  return [lo, hi];
}

export function positiveExtent(values: number[]): [number, number] {
  const positives = values.filter((v) => v > 0);
  if (positives.length === 0) {
    throw new Error("no positive values for a log axis");
  }
  return extent(positives);
}
