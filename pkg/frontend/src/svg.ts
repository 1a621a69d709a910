/**
 * Minimal SVG assembly. Pure string building with fixed number formatting,
 * so identical inputs produce byte-identical files.
 */

export function fmt(x: number): string {
  if (!Number.isFinite(x)) return "0";
  if (x === 0) return "0";
  const ax = Math.abs(x);
  if (ax >= 1e5 || ax < 1e-3) {
    return x.toExponential(3);
  }
  return Number(x.toFixed(3)).toString();
}

/** Tick label formatting: short, locale-free. */
export function fmtTick(x: number): string {
  if (x === 0) return "0";
  const ax = Math.abs(x);
  if (ax >= 1e4 || ax < 1e-2) return x.toExponential(2);
  return Number(x.toPrecision(4)).toString();
}

export interface Scale {
  domain: [number, number];
  range: [number, number];
}

export function scale(s: Scale, v: number): number {
  const [d0, d1] = s.domain;
  const [r0, r1] = s.range;
  if (d1 === d0) return (r0 + r1) / 2;
  return r0 + ((v - d0) / (d1 - d0)) * (r1 - r0);
}

export function ticks(domain: [number, number], count = 5): number[] {
  const [lo, hi] = domain;
  const out: number[] = [];
  for (let i = 0; i < count; i++) {
    out.push(lo + ((hi - lo) * i) / (count - 1));
  }
  return out;
}

export class SvgBuilder {
  private parts: string[] = [];

  constructor(
    readonly width: number,
    readonly height: number,
  ) {
    this.parts.push(
      `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
        `viewBox="0 0 ${width} ${height}" font-family="Menlo, monospace">`,
      `<rect x="0" y="0" width="${width}" height="${height}" fill="#ffffff"/>`,
    );
  }

  rect(x: number, y: number, w: number, h: number, fill: string): void {
    this.parts.push(
      `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" fill="${fill}"/>`,
    );
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke: string, width = 1): void {
    this.parts.push(
      `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" ` +
        `stroke="${stroke}" stroke-width="${width}"/>`,
    );
  }

  path(points: [number, number][], stroke: string, width = 1.5, dash?: string): void {
    if (points.length === 0) return;
    const d = points
      .map(([x, y], i) => `${i === 0 ? "M" : "L"}${fmt(x)} ${fmt(y)}`)
      .join(" ");
    const dashAttr = dash ? ` stroke-dasharray="${dash}"` : "";
    this.parts.push(
      `<path d="${d}" fill="none" stroke="${stroke}" stroke-width="${width}"${dashAttr}/>`,
    );
  }

  text(
    x: number,
    y: number,
    content: string,
    opts: { size?: number; anchor?: string; rotate?: number } = {},
  ): void {
    const size = opts.size ?? 11;
    const anchor = opts.anchor ?? "start";
    const transform =
      opts.rotate !== undefined
        ? ` transform="rotate(${opts.rotate} ${fmt(x)} ${fmt(y)})"`
        : "";
    this.parts.push(
      `<text x="${fmt(x)}" y="${fmt(y)}" font-size="${size}" ` +
        `text-anchor="${anchor}" fill="#222222"${transform}>${escapeXml(content)}</text>`,
    );
  }

  render(): string {
    return this.parts.join("\n") + "\n</svg>\n";
  }
}

export function escapeXml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export interface Frame {
  x: Scale;
  y: Scale;
}

/** Standard margins and axis frame for a plot area. */
export function frame(
  svg: SvgBuilder,
  xDomain: [number, number],
  yDomain: [number, number],
  labels: { x: string; y: string; title?: string },
  margins = { left: 70, right: 30, top: 36, bottom: 48 },
): Frame {
  const x: Scale = { domain: xDomain, range: [margins.left, svg.width - margins.right] };
  const y: Scale = { domain: yDomain, range: [svg.height - margins.bottom, margins.top] };

  svg.line(x.range[0], y.range[0], x.range[1], y.range[0], "#222222");
  svg.line(x.range[0], y.range[0], x.range[0], y.range[1], "#222222");
  for (const t of ticks(xDomain)) {
    const px = scale(x, t);
    svg.line(px, y.range[0], px, y.range[0] + 4, "#222222");
    svg.text(px, y.range[0] + 16, fmtTick(t), { anchor: "middle", size: 10 });
  }
  for (const t of ticks(yDomain)) {
    const py = scale(y, t);
    svg.line(x.range[0] - 4, py, x.range[0], py, "#222222");
    svg.text(x.range[0] - 7, py + 3, fmtTick(t), { anchor: "end", size: 10 });
  }
  svg.text((x.range[0] + x.range[1]) / 2, svg.height - 12, labels.x, { anchor: "middle" });
  svg.text(16, (y.range[0] + y.range[1]) / 2, labels.y, {
    anchor: "middle",
    rotate: -90,
  });
  if (labels.title) {
    svg.text((x.range[0] + x.range[1]) / 2, 20, labels.title, { anchor: "middle", size: 13 });
  }
  return { x, y };
}
