/**
 * Figure kinds over the simulator's CSV artifacts.
 *
 * Every kind builds the complete SVG string before anything is written,
 * so a schema failure never leaves a partial file behind.
 */

import * as fs from "fs";
import * as path from "path";

import { column, readCsv, requireColumns, SchemaError, Table } from "./csv";
import {
  extent, linearTicks, padDomain, Panel, PanelSpec, positiveExtent,
  SERIES_COLORS, Svg,
} from "./svg";

const MARGIN = { left: 64, right: 20, top: 34, bottom: 46 };
const PANEL_W = 320;
const PANEL_H = 240;

function panelGrid(count: number, columns = Math.min(count, 3)) {
  const rows = Math.ceil(count / columns);
  const width = MARGIN.left + columns * (PANEL_W + MARGIN.right) + 8;
  const height = MARGIN.top + rows * (PANEL_H + MARGIN.bottom) + 8;
  const svg = new Svg(width, height);
  const place = (i: number): { x: number; y: number } => ({
    x: MARGIN.left + (i % columns) * (PANEL_W + MARGIN.right),
    y: MARGIN.top + Math.floor(i / columns) * (PANEL_H + MARGIN.bottom),
  });
  return { svg, place };
}

function baseName(table: Table): string {
  return path.basename(table.path).replace(/\.csv$/, "");
}

// ---------------------------------------------------------------------------
// fig1: time series with a marginal value histogram
// ---------------------------------------------------------------------------

function renderFig1(tables: Table[]): string {
  const table = tables[0];
  requireColumns(table, ["t"]);
  const valueColumn = table.columns.find((c) => c.startsWith("v"));
  if (!valueColumn) {
    throw new SchemaError(`${table.path}: no vertex column (v<i>) found`);
  }
  const t = column(table, "t");
  const z = column(table, valueColumn);

  const { svg, place } = panelGrid(2);
  const a = place(0);
  const series = new Panel(svg, {
    ...a, width: PANEL_W, height: PANEL_H,
    xDomain: extent(t), yDomain: padDomain(...extent(z), false),
    title: `${valueColumn}(t)`, xLabel: "t", yLabel: valueColumn,
  });
  series.frame();
  series.path(t, z, `stroke="${SERIES_COLORS[0]}" stroke-width="0.7"`);

  const bins = 40;
  const [lo, hi] = extent(z);
  const width = (hi - lo || 1) / bins;
  const counts = new Array<number>(bins).fill(0);
  for (const v of z) {
    counts[Math.min(Math.floor((v - lo) / width), bins - 1)] += 1;
  }
  const b = place(1);
  const hist = new Panel(svg, {
    ...b, width: PANEL_W, height: PANEL_H,
    xDomain: padDomain(lo, hi, false),
    yDomain: [0, Math.max(...counts) * 1.05],
    title: "value distribution", xLabel: valueColumn, yLabel: "count",
  });
  hist.frame();
  hist.vbars(
    counts.map((_, i) => lo + i * width),
    counts.map((_, i) => lo + (i + 1) * width),
    counts, 0, `fill="${SERIES_COLORS[0]}" stroke="none"`);
  return svg.toString();
}

// ---------------------------------------------------------------------------
// fig2: flux-fluctuation scatter with the predicted-slope reference line
// ---------------------------------------------------------------------------

function renderFig2(tables: Table[]): string {
  const { svg, place } = panelGrid(tables.length);
  tables.forEach((table, i) => {
    requireColumns(table, ["v", "k", "mean", "sigma"]);
    const mean = column(table, "mean");
    const sigma = column(table, "sigma");
    const degrees = column(table, "k");
    const arcs = degrees.reduce((acc, k) => acc + k, 0);

    const keep = mean.map((m, j) => [m, sigma[j]] as const)
      .filter(([m, s]) => m > 0 && s > 0);
    if (keep.length === 0) {
      throw new SchemaError(`${table.path}: no positive (mean, sigma) pairs`);
    }
    const xs = keep.map(([m]) => m);
    const ys = keep.map(([, s]) => s);
    const spot = place(i);
    const panel = new Panel(svg, {
      ...spot, width: PANEL_W, height: PANEL_H,
      xDomain: padDomain(...positiveExtent(xs), true),
      yDomain: padDomain(...positiveExtent(ys), true),
      xLog: true, yLog: true,
      title: baseName(table), xLabel: "mean flux", yLabel: "sigma",
    });
    panel.frame();
    panel.scatter(xs, ys, `fill="none" stroke="${SERIES_COLORS[i % 6]}"`);

    // predicted slope 1/sqrt(2E): sigma = sqrt(mean / 2E)
    const [mLo, mHi] = positiveExtent(xs);
    const lineX: number[] = [];
    for (let j = 0; j <= 32; j += 1) {
      lineX.push(mLo * Math.pow(mHi / mLo, j / 32));
    }
    panel.path(lineX, lineX.map((m) => Math.sqrt(m / arcs)),
      'stroke="black" stroke-width="1.2" class="ref-slope"');
  });
  return svg.toString();
}

// ---------------------------------------------------------------------------
// fig3: extreme-event probability vs degree with the collapse inset
// ---------------------------------------------------------------------------

function renderFig3(tables: Table[]): string {
  const profiles = tables[0];
  requireColumns(profiles, ["k", "F_mean", "F_sem", "m"]);
  const gamma = tables.length > 1 ? tables[1] : null;
  if (gamma) {
    requireColumns(gamma, ["m", "gamma", "log_amplitude"]);
  }

  const k = column(profiles, "k");
  const f = column(profiles, "F_mean");
  const m = column(profiles, "m");
  const mValues = [...new Set(m)].sort((a, b) => a - b);

  const fits = new Map<number, { gamma: number; logAmp: number }>();
  if (gamma) {
    const gm = column(gamma, "m");
    const gg = column(gamma, "gamma");
    const ga = column(gamma, "log_amplitude");
    gm.forEach((value, i) => fits.set(value, { gamma: gg[i], logAmp: ga[i] }));
  }

  const svg = new Svg(MARGIN.left + PANEL_W * 1.5 + MARGIN.right + 8,
    MARGIN.top + PANEL_H * 1.35 + MARGIN.bottom + 8);
  const keepAll = k.map((kk, i) => [kk, f[i], m[i]] as const)
    .filter(([kk, ff]) => kk > 0 && ff > 0);
  const main = new Panel(svg, {
    x: MARGIN.left, y: MARGIN.top, width: PANEL_W * 1.5, height: PANEL_H * 1.35,
    xDomain: padDomain(...positiveExtent(keepAll.map(([kk]) => kk)), true),
    yDomain: padDomain(...positiveExtent(keepAll.map(([, ff]) => ff)), true),
    xLog: true, yLog: true,
    title: "extreme-event probability vs degree",
    xLabel: "degree k", yLabel: "F(k)",
  });
  main.frame();

  mValues.forEach((mv, s) => {
    const rows = keepAll.filter(([, , mm]) => mm === mv);
    const xs = rows.map(([kk]) => kk);
    const ys = rows.map(([, ff]) => ff);
    const color = SERIES_COLORS[s % 6];
    main.scatter(xs, ys, `fill="${color}" stroke="none"`);
    main.path(xs, ys, `stroke="${color}" stroke-width="0.8"`);
    svg.text(MARGIN.left + PANEL_W * 1.5 - 48,
      MARGIN.top + 16 + 13 * s, `m=${mv}`, `fill="${color}"`);
    const fit = fits.get(mv);
    if (fit) {
      main.path(xs, xs.map((kk) =>
        Math.exp(fit.logAmp) * Math.pow(kk, fit.gamma)),
        `stroke="${color}" stroke-width="1" stroke-dasharray="4 3"`);
    }
  });

  if (gamma) {
    // inset: profiles divided by their fitted power law collapse onto one
    const inset = new Panel(svg, {
      x: MARGIN.left + 30, y: MARGIN.top + 18,
      width: PANEL_W * 0.55, height: PANEL_H * 0.5,
      xDomain: padDomain(...positiveExtent(keepAll.map(([kk]) => kk)), true),
      yDomain: [0.5, 2.0], xLog: true, yLog: true,
    });
    svg.add(`<rect x="${MARGIN.left + 30}" y="${MARGIN.top + 18}" ` +
      `width="${PANEL_W * 0.55}" height="${PANEL_H * 0.5}" fill="white"/>`);
    inset.frame();
    mValues.forEach((mv, s) => {
      const fit = fits.get(mv);
      if (!fit) return;
      const rows = keepAll.filter(([, , mm]) => mm === mv);
      inset.scatter(rows.map(([kk]) => kk),
        rows.map(([kk, ff]) =>
          ff / (Math.exp(fit.logAmp) * Math.pow(kk, fit.gamma))),
        `fill="${SERIES_COLORS[s % 6]}" stroke="none"`, 1.6);
    });
  }
  return svg.toString();
}

// ---------------------------------------------------------------------------
// correlations (fig4 / fig5): one curve per input file
// ---------------------------------------------------------------------------

function renderCorrelations(tables: Table[]): string {
  const { svg, place } = panelGrid(tables.length);
  tables.forEach((table, i) => {
    requireColumns(table, ["tau", "C"]);
    const tau = column(table, "tau");
    const c = column(table, "C");
    const spot = place(i);
    const panel = new Panel(svg, {
      ...spot, width: PANEL_W, height: PANEL_H,
      xDomain: extent(tau), yDomain: padDomain(...extent(c.concat([0])), false),
      title: baseName(table), xLabel: "lag tau", yLabel: "C(tau)",
    });
    panel.frame();
    panel.path(extent(tau) as unknown as number[], [0, 0],
      'stroke="#999" stroke-dasharray="2 3"');
    panel.path(tau, c, `stroke="${SERIES_COLORS[i % 6]}" stroke-width="1"`);
  });
  return svg.toString();
}

// ---------------------------------------------------------------------------
// ee: per-vertex exceedance probability vs degree
// ---------------------------------------------------------------------------

function renderEE(tables: Table[]): string {
  const { svg, place } = panelGrid(tables.length);
  tables.forEach((table, i) => {
    requireColumns(table, ["v", "k", "F"]);
    const k = column(table, "k");
    const f = column(table, "F");
    const rows = k.map((kk, j) => [kk, f[j]] as const)
      .filter(([kk, ff]) => kk > 0 && ff > 0);
    if (rows.length === 0) {
      throw new SchemaError(`${table.path}: no positive (k, F) rows to plot`);
    }
    const spot = place(i);
    const panel = new Panel(svg, {
      ...spot, width: PANEL_W, height: PANEL_H,
      xDomain: padDomain(...positiveExtent(rows.map(([kk]) => kk)), true),
      yDomain: padDomain(...positiveExtent(rows.map(([, ff]) => ff)), true),
      xLog: true, yLog: true,
      title: baseName(table), xLabel: "degree k", yLabel: "F",
    });
    panel.frame();
    panel.scatter(rows.map(([kk]) => kk), rows.map(([, ff]) => ff),
      `fill="${SERIES_COLORS[i % 6]}" fill-opacity="0.5" stroke="none"`);
  });
  return svg.toString();
}

// ---------------------------------------------------------------------------
// recurrence: interval histograms and mean recurrence vs degree
// ---------------------------------------------------------------------------

function renderRecHist(tables: Table[]): string {
  const { svg, place } = panelGrid(tables.length);
  tables.forEach((table, i) => {
    requireColumns(table, ["bin_lo", "bin_hi", "count", "expected"]);
    const lo = column(table, "bin_lo");
    const hi = column(table, "bin_hi");
    const count = column(table, "count");
    const expected = column(table, "expected");
    const spot = place(i);
    const top = Math.max(...count, ...expected) * 1.05 || 1;
    const panel = new Panel(svg, {
      ...spot, width: PANEL_W, height: PANEL_H,
      xDomain: [Math.min(...lo), Math.max(...hi)], yDomain: [0, top],
      title: baseName(table), xLabel: "recurrence interval", yLabel: "count",
    });
    panel.frame();
    panel.vbars(lo, hi, count, 0,
      `fill="${SERIES_COLORS[i % 6]}" fill-opacity="0.6" stroke="none"`);
    panel.path(lo.map((v, j) => (v + hi[j]) / 2), expected,
      'stroke="black" stroke-width="1.2"');
  });
  return svg.toString();
}

function renderRecDegree(tables: Table[]): string {
  const { svg, place } = panelGrid(tables.length);
  tables.forEach((table, i) => {
    requireColumns(table, ["v", "k", "mean_rec", "rate"]);
    const k = column(table, "k");
    const rec = column(table, "mean_rec");
    const spot = place(i);
    const panel = new Panel(svg, {
      ...spot, width: PANEL_W, height: PANEL_H,
      xDomain: padDomain(...positiveExtent(k), true),
      yDomain: padDomain(...positiveExtent(rec), true),
      xLog: true, yLog: true,
      title: baseName(table), xLabel: "degree k", yLabel: "mean recurrence",
    });
    panel.frame();
    panel.scatter(k, rec,
      `fill="${SERIES_COLORS[i % 6]}" fill-opacity="0.5" stroke="none"`);
  });
  return svg.toString();
}

// ---------------------------------------------------------------------------
// table: any CSV as a typeset table
// ---------------------------------------------------------------------------

function renderTable(tables: Table[]): string {
  const table = tables[0];
  const rowH = 18;
  const colW = 110;
  const width = 40 + table.columns.length * colW;
  const height = 60 + (table.rows.length + 1) * rowH;
  const svg = new Svg(width, height);
  svg.text(20, 28, baseName(table), 'font-weight="bold" font-size="13"');
  table.columns.forEach((name, j) => {
    svg.text(24 + j * colW, 52, name, 'font-weight="bold"');
  });
  svg.line(20, 58, width - 20, 58, 'stroke="black"');
  table.rows.forEach((row, i) => {
    row.forEach((cell, j) => {
      svg.text(24 + j * colW, 52 + (i + 1) * rowH, cell);
    });
  });
  return svg.toString();
}

// ---------------------------------------------------------------------------
// registry and entry point
// ---------------------------------------------------------------------------

export const KINDS: Record<string, (tables: Table[]) => string> = {
  fig1: renderFig1,
  fig2: renderFig2,
  fig3: renderFig3,
  fig4: renderCorrelations,
  fig5: renderCorrelations,
  corr: renderCorrelations,
  ee: renderEE,
  "rec-hist": renderRecHist,
  "rec-degree": renderRecDegree,
  table: renderTable,
};

export function render(kind: string, inputs: string[], outPath: string): void {
  const make = KINDS[kind];
  if (!make) {
    throw new SchemaError(
      `unknown figure kind '${kind}' (have: ${Object.keys(KINDS).join(", ")})`);
  }
  if (inputs.length === 0) {
    throw new SchemaError("at least one input CSV is required");
  }
  const content = make(inputs.map(readCsv));
  fs.mkdirSync(path.dirname(path.resolve(outPath)), { recursive: true });
  fs.writeFileSync(outPath, content);
}
