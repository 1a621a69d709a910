/**
 * Figure builders: pure functions from parsed CSV tables and a recipe to an
 * SVG string. No physics is recomputed here; the renderer only arranges
 * values already present in the files (plus the printed locus fit curves as
 * overlay data).
 */

import { SERIES_COLORS, viridis } from "./colormap.js";
import { Table, SchemaError, numericColumn, sortedUnique } from "./csv.js";
import { locusBranches } from "./locus.js";
import { Recipe } from "./recipe.js";
import { Frame, SvgBuilder, fmtTick, frame, scale } from "./svg.js";

const HEATMAP_MARGINS = { left: 70, right: 110, top: 36, bottom: 48 };

interface Grid {
  xs: number[];
  ys: number[];
  cells: number[][]; // cells[iy][ix]
}

function gridFromLongForm(table: Table, recipe: Recipe): Grid {
  const xv = numericColumn(table, recipe.x!.column);
  const yv = numericColumn(table, recipe.y!.column);
  const vv = numericColumn(table, recipe.value!.column);
  const xs = sortedUnique(xv);
  const ys = sortedUnique(yv);
  if (xs.length < 2 || ys.length < 2) {
    throw new SchemaError("heatmap needs at least a 2x2 grid of coordinates");
  }
  const cells: number[][] = ys.map(() => xs.map(() => Number.NaN));
  for (let r = 0; r < vv.length; r++) {
    const ix = xs.indexOf(xv[r]);
    const iy = ys.indexOf(yv[r]);
    if (ix >= 0 && iy >= 0) {
      cells[iy][ix] = vv[r];
    }
  }
  return { xs, ys, cells };
}

function colorRange(recipe: Recipe, grid: Grid): [number, number] {
  if (recipe.color_scale) {
    return [recipe.color_scale.min, recipe.color_scale.max];
  }
  let lo = Number.POSITIVE_INFINITY;
  let hi = Number.NEGATIVE_INFINITY;
  for (const row of grid.cells) {
    for (const v of row) {
      if (!Number.isNaN(v)) {
        lo = Math.min(lo, v);
        hi = Math.max(hi, v);
      }
    }
  }
  if (!Number.isFinite(lo)) {
    throw new SchemaError("heatmap has no finite values");
  }
  return lo === hi ? [lo - 0.5, hi + 0.5] : [lo, hi];
}

function drawHeatmapCells(svg: SvgBuilder, f: Frame, grid: Grid, range: [number, number]): void {
  const { xs, ys, cells } = grid;
  // cell edges at midpoints between grid coordinates
  const edges = (vals: number[]): number[] => {
    const e = [vals[0] - (vals[1] - vals[0]) / 2];
    for (let i = 0; i + 1 < vals.length; i++) e.push((vals[i] + vals[i + 1]) / 2);
    e.push(vals[vals.length - 1] + (vals[vals.length - 1] - vals[vals.length - 2]) / 2);
    return e;
  };
  const ex = edges(xs);
  const ey = edges(ys);
  const [lo, hi] = range;
  for (let iy = 0; iy < ys.length; iy++) {
    for (let ix = 0; ix < xs.length; ix++) {
      const v = cells[iy][ix];
      const u = (v - lo) / (hi - lo);
      const x0 = scale(f.x, ex[ix]);
      const x1 = scale(f.x, ex[ix + 1]);
      const y0 = scale(f.y, ey[iy]);
      const y1 = scale(f.y, ey[iy + 1]);
      svg.rect(Math.min(x0, x1), Math.min(y0, y1), Math.abs(x1 - x0), Math.abs(y1 - y0), viridis(u));
    }
  }
}

function drawColorbar(svg: SvgBuilder, range: [number, number], label: string): void {
  const x = svg.width - HEATMAP_MARGINS.right + 24;
  const top = HEATMAP_MARGINS.top;
  const bottom = svg.height - HEATMAP_MARGINS.bottom;
  const steps = 48;
  const h = (bottom - top) / steps;
  for (let i = 0; i < steps; i++) {
    svg.rect(x, bottom - (i + 1) * h, 16, h + 0.5, viridis((i + 0.5) / steps));
  }
  svg.text(x + 20, bottom + 3, fmtTick(range[0]), { size: 10 });
  svg.text(x + 20, top + 8, fmtTick(range[1]), { size: 10 });
  svg.text(x + 8, top - 8, label, { size: 10 });
}

export function heatmapFigure(table: Table, recipe: Recipe): string {
  const svg = new SvgBuilder(recipe.width ?? 640, recipe.height ?? 480);
  const grid = gridFromLongForm(table, recipe);
  const range = colorRange(recipe, grid);
  const pad = (vals: number[]) => {
    const step = (vals[vals.length - 1] - vals[0]) / (vals.length - 1);
    return [vals[0] - step / 2, vals[vals.length - 1] + step / 2] as [number, number];
  };
  const f = frame(
    svg,
    pad(grid.xs),
    pad(grid.ys),
    {
      x: recipe.x!.label ?? recipe.x!.column,
      y: recipe.y!.label ?? recipe.y!.column,
      title: recipe.title,
    },
    HEATMAP_MARGINS,
  );
  drawHeatmapCells(svg, f, grid, range);
  drawColorbar(svg, range, recipe.value!.label ?? recipe.value!.column);
  if (recipe.kind === "locus_overlay") {
    drawLocusOverlay(svg, f, grid, recipe);
  }
  return svg.render();
}

function drawLocusOverlay(svg: SvgBuilder, f: Frame, grid: Grid, recipe: Recipe): void {
  const yLo = Math.min(grid.ys[0], grid.ys[grid.ys.length - 1]);
  const yHi = Math.max(grid.ys[0], grid.ys[grid.ys.length - 1]);
  for (const branch of locusBranches(recipe.overlay!.case)) {
    const lo = Math.max(branch.lo, grid.xs[0]);
    const hi = Math.min(branch.hi, grid.xs[grid.xs.length - 1]);
    if (hi <= lo) continue;
    let segment: [number, number][] = [];
    const n = 256;
    for (let i = 0; i <= n; i++) {
      const b = lo + ((hi - lo) * i) / n;
      const v = branch.f(b);
      if (v < yLo || v > yHi) {
        if (segment.length > 1) svg.path(segment, "#ffffff", 2, "6 3");
        segment = [];
        continue;
      }
      segment.push([scale(f.x, b), scale(f.y, v)]);
    }
    if (segment.length > 1) svg.path(segment, "#ffffff", 2, "6 3");
  }
}

export function cutsFigure(table: Table, recipe: Recipe): string {
  const svg = new SvgBuilder(recipe.width ?? 640, recipe.height ?? 420);
  const xv = numericColumn(table, recipe.x!.column);
  const vv = numericColumn(table, recipe.value!.column);
  const groups = recipe.group_by ? numericColumn(table, recipe.group_by) : xv.map(() => 0);
  const keys = sortedUnique(groups);

  const finite = vv.filter((v) => !Number.isNaN(v));
  if (finite.length === 0) throw new SchemaError("cut figure has no finite values");
  const vLo = Math.min(...finite);
  const vHi = Math.max(...finite);
  const padV = vLo === vHi ? 0.5 : 0.06 * (vHi - vLo);
  const f = frame(svg, [Math.min(...xv), Math.max(...xv)], [vLo - padV, vHi + padV], {
    x: recipe.x!.label ?? recipe.x!.column,
    y: recipe.value!.label ?? recipe.value!.column,
    title: recipe.title,
  });
  keys.forEach((key, ki) => {
    const pts: [number, number][] = [];
    for (let r = 0; r < xv.length; r++) {
      if (groups[r] === key && !Number.isNaN(vv[r])) {
        pts.push([xv[r], vv[r]]);
      }
    }
    pts.sort((a, b) => a[0] - b[0]);
    const color = SERIES_COLORS[ki % SERIES_COLORS.length];
    svg.path(pts.map(([x, y]) => [scale(f.x, x), scale(f.y, y)]), color, 1.8);
    if (recipe.group_by) {
      const ly = 46 + 14 * ki;
      svg.line(svg.width - 150, ly, svg.width - 130, ly, color, 2);
      svg.text(svg.width - 125, ly + 3, `${recipe.group_by} = ${fmtTick(key)}`, { size: 10 });
    }
  });
  return svg.render();
}

export function trajectoryFigure(table: Table, recipe: Recipe): string {
  const svg = new SvgBuilder(recipe.width ?? 720, recipe.height ?? 420);
  const t = numericColumn(table, "t");
  const columns = recipe.columns ?? ["cos_theta"];
  const series = columns.map((c) => numericColumn(table, c));
  const all = series.flat().filter((v) => !Number.isNaN(v));
  const vLo = Math.min(...all);
  const vHi = Math.max(...all);
  const padV = vLo === vHi ? 0.5 : 0.06 * (vHi - vLo);
  const f = frame(svg, [t[0], t[t.length - 1]], [vLo - padV, vHi + padV], {
    x: recipe.x?.label ?? "t (a.u.)",
    y: recipe.value?.label ?? columns.join(", "),
    title: recipe.title,
  });
  series.forEach((vals, si) => {
    const pts: [number, number][] = [];
    for (let r = 0; r < t.length; r++) {
      if (!Number.isNaN(vals[r])) pts.push([scale(f.x, t[r]), scale(f.y, vals[r])]);
    }
    const color = SERIES_COLORS[si % SERIES_COLORS.length];
    svg.path(pts, color, 1.2);
    if (columns.length > 1) {
      const ly = 46 + 14 * si;
      svg.line(svg.width - 150, ly, svg.width - 130, ly, color, 2);
      svg.text(svg.width - 125, ly + 3, columns[si], { size: 10 });
    }
  });
  return svg.render();
}

export function buildFigure(table: Table, recipe: Recipe): string {
  switch (recipe.kind) {
    case "heatmap":
    case "locus_overlay":
      return heatmapFigure(table, recipe);
    case "cuts":
      return cutsFigure(table, recipe);
    case "trajectory":
      return trajectoryFigure(table, recipe);
  }
}
