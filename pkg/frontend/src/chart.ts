// Hand-rolled SVG line chart for sweep results: points joined in axis
// order, each point hoverable to reveal the record sent and the label
// returned. No chart library, no local price math.

import type { ScoredRecord } from "./api";
import { renderUsd } from "./money";

export interface SweepPoint {
  x: number;
  record: ScoredRecord;
}

export class MixedModelsError extends Error {
  constructor(models: string[]) {
    super(`sweep responses mix models: ${models.join(", ")}`);
  }
}

const WIDTH = 640;
const HEIGHT = 320;
const PAD = 48;

function scale(value: number, lo: number, hi: number, outLo: number, outHi: number): number {
  if (hi === lo) return (outLo + outHi) / 2;
  return outLo + ((value - lo) / (hi - lo)) * (outHi - outLo);
}

/** Builds the chart SVG; needs at least two points (the caller falls back
 * to a single price card otherwise). */
export function renderSweepChart(points: SweepPoint[], axisLabel: string): SVGSVGElement {
  if (points.length < 2) {
    throw new Error("a sweep chart needs at least 2 points");
  }
  const models = [...new Set(points.map((p) => p.record.Model))];
  if (models.length > 1) throw new MixedModelsError(models);

  const ordered = [...points].sort((a, b) => a.x - b.x);
  const ys = ordered.map((p) => Number(p.record["Scored Labels"]));
  const xLo = ordered[0].x;
  const xHi = ordered[ordered.length - 1].x;
  const yLo = Math.min(...ys);
  const yHi = Math.max(...ys);

  const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
  svg.setAttribute("viewBox", `0 0 ${WIDTH} ${HEIGHT}`);
  svg.setAttribute("class", "sweep-chart");
  svg.setAttribute("role", "img");
  svg.setAttribute("aria-label", `predicted price vs ${axisLabel}`);

  const axes = document.createElementNS("http://www.w3.org/2000/svg", "path");
  axes.setAttribute("d", `M ${PAD} ${PAD} V ${HEIGHT - PAD} H ${WIDTH - PAD}`);
  axes.setAttribute("class", "axes");
  svg.appendChild(axes);

  const coords = ordered.map((p, i) => ({
    cx: scale(p.x, xLo, xHi, PAD, WIDTH - PAD),
    cy: scale(ys[i], yLo, yHi, HEIGHT - PAD, PAD),
    point: p,
  }));

  const line = document.createElementNS("http://www.w3.org/2000/svg", "polyline");
  line.setAttribute("points", coords.map((c) => `${c.cx},${c.cy}`).join(" "));
  line.setAttribute("class", "sweep-line");
  line.setAttribute("fill", "none");
  svg.appendChild(line);

  for (const { cx, cy, point } of coords) {
    const label = point.record["Scored Labels"];
    const dot = document.createElementNS("http://www.w3.org/2000/svg", "circle");
    dot.setAttribute("cx", String(cx));
    dot.setAttribute("cy", String(cy));
    dot.setAttribute("r", "4");
    dot.setAttribute("class", "sweep-point");
    dot.dataset.x = String(point.x);
    dot.dataset.label = label;
    const { "Scored Labels": _ignored, DateCreated: _dc, ...sent } = point.record;
    const hover = document.createElementNS("http://www.w3.org/2000/svg", "title");
    hover.textContent = `sent ${JSON.stringify(sent)} -> ${renderUsd(label)} (Scored Labels ${label})`;
    dot.appendChild(hover);
    svg.appendChild(dot);
  }
  return svg;
}
