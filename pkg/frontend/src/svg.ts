import { ticks } from "d3-array";

/** One polyline with its legend label and optional extra path attributes. */
export interface PlotSeries {
  label: string;
  xs: number[];
  ys: number[];
  attrs?: Record<string, string>;
}

export interface PlotOptions {
  xDomain: [number, number];
  yDomain: [number, number];
  xLabel: string;
  yLabel: string;
  series: PlotSeries[];
  legendTitle?: string;
  zeroLine?: boolean;
  rootAttrs?: Record<string, string>;
}

export const WIDTH = 640;
export const HEIGHT = 400;
const MARGIN = { top: 24, right: 20, bottom: 52, left: 68 };

export const PALETTE = [
  "#4269d0",
  "#efb118",
  "#ff725c",
  "#6cc5b0",
  "#3ca951",
  "#ff8ab7",
  "#a463f2",
];

type Scale = (v: number) => number;

function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0;
  return (v) => r0 + ((v - d0) / span) * (r1 - r0);
}

/** Pixel coordinate with fixed precision so output is byte-deterministic. */
const px = (v: number) => v.toFixed(2);

/** Tick label without binary-float noise. */
const tickText = (v: number) => String(Number(v.toPrecision(12)));

function escapeXml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function attrText(attrs: Record<string, string> | undefined): string {
  if (!attrs) return "";
  return Object.keys(attrs)
    .sort()
    .map((k) => ` ${k}="${escapeXml(attrs[k])}"`)
    .join("");
}

function pathFor(series: PlotSeries, x: Scale, y: Scale): string {
  const parts: string[] = [];
  for (let i = 0; i < series.xs.length; i++) {
    const cmd = i === 0 ? "M" : "L";
    parts.push(`${cmd}${px(x(series.xs[i]))},${px(y(series.ys[i]))}`);
  }
  return parts.join("");
}

/** Assemble a complete standalone SVG plot as a string. */
export function renderPlot(opts: PlotOptions): string {
  const plotLeft = MARGIN.left;
  const plotRight = WIDTH - MARGIN.right;
  const plotTop = MARGIN.top;
  const plotBottom = HEIGHT - MARGIN.bottom;
  const x = linearScale(opts.xDomain, [plotLeft, plotRight]);
  const y = linearScale(opts.yDomain, [plotBottom, plotTop]);

  const out: string[] = [];
  out.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
      `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="sans-serif" font-size="12"` +
      `${attrText(opts.rootAttrs)}>`,
  );
  out.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);

  const xTicks = ticks(opts.xDomain[0], opts.xDomain[1], 7);
  const yTicks = ticks(opts.yDomain[0], opts.yDomain[1], 5);

  out.push(`<g class="grid" stroke="#dddddd">`);
  for (const t of yTicks) {
    const yy = px(y(t));
    out.push(`<line x1="${px(plotLeft)}" y1="${yy}" x2="${px(plotRight)}" y2="${yy}"/>`);
  }
  out.push(`</g>`);

  if (opts.zeroLine && opts.yDomain[0] < 0 && opts.yDomain[1] > 0) {
    const yy = px(y(0));
    out.push(
      `<line class="zero" x1="${px(plotLeft)}" y1="${yy}" x2="${px(plotRight)}" y2="${yy}" stroke="#888888"/>`,
    );
  }

  out.push(`<g class="x-axis">`);
  out.push(
    `<line x1="${px(plotLeft)}" y1="${px(plotBottom)}" x2="${px(plotRight)}" y2="${px(plotBottom)}" stroke="black"/>`,
  );
  for (const t of xTicks) {
    const xx = px(x(t));
    out.push(
      `<line x1="${xx}" y1="${px(plotBottom)}" x2="${xx}" y2="${px(plotBottom + 6)}" stroke="black"/>`,
    );
    out.push(
      `<text class="x-tick" x="${xx}" y="${px(plotBottom + 20)}" text-anchor="middle">${tickText(t)}</text>`,
    );
  }
  out.push(
    `<text class="x-label" x="${px((plotLeft + plotRight) / 2)}" y="${px(HEIGHT - 10)}" text-anchor="middle">${escapeXml(opts.xLabel)}</text>`,
  );
  out.push(`</g>`);

  out.push(`<g class="y-axis">`);
  out.push(
    `<line x1="${px(plotLeft)}" y1="${px(plotTop)}" x2="${px(plotLeft)}" y2="${px(plotBottom)}" stroke="black"/>`,
  );
  for (const t of yTicks) {
    const yy = px(y(t));
    out.push(
      `<line x1="${px(plotLeft - 6)}" y1="${yy}" x2="${px(plotLeft)}" y2="${yy}" stroke="black"/>`,
    );
    out.push(
      `<text class="y-tick" x="${px(plotLeft - 9)}" y="${px(y(t) + 4)}" text-anchor="end">${tickText(t)}</text>`,
    );
  }
  out.push(
    `<text class="y-label" transform="translate(14,${px((plotTop + plotBottom) / 2)}) rotate(-90)" text-anchor="middle">${escapeXml(opts.yLabel)}</text>`,
  );
  out.push(`</g>`);

  out.push(`<g class="curves" fill="none" stroke-width="1.5">`);
  opts.series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    const extra = attrText({ "data-role": s.label, ...s.attrs });
    out.push(`<path class="curve" stroke="${color}"${extra} d="${pathFor(s, x, y)}"/>`);
  });
  out.push(`</g>`);

  const legendX = plotRight - 150;
  let legendY = plotTop + 8;
  out.push(`<g class="legend">`);
  if (opts.legendTitle) {
    out.push(
      `<text class="legend-title" x="${px(legendX)}" y="${px(legendY + 4)}" font-weight="bold">${escapeXml(opts.legendTitle)}</text>`,
    );
    legendY += 18;
  }
  opts.series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    const yy = legendY + i * 18;
    out.push(
      `<line x1="${px(legendX)}" y1="${px(yy)}" x2="${px(legendX + 24)}" y2="${px(yy)}" stroke="${color}" stroke-width="2"/>`,
    );
    out.push(
      `<text class="legend-label" x="${px(legendX + 30)}" y="${px(yy + 4)}">${escapeXml(s.label)}</text>`,
    );
  });
  out.push(`</g>`);

  out.push(`</svg>`);
  return out.join("\n") + "\n";
}
