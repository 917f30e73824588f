/** SVG-DOM rendering of the document plus analysis overlays. */

import type { DrawingDoc } from "./model.js";
import { toNumber } from "./rational.js";
import type { Analysis } from "./overlay.js";
import { tripleCircles, violationEdgeIndices } from "./overlay.js";

export const TAG_COLORS: Record<string, string> = {
  initial: "#000000",
  pink: "#e7549b",
  darkblue: "#00008b",
  final: "#356635",
};

export interface ViewTransform {
  panX: number;
  panY: number;
  zoom: number;
}

export function toScreen(view: ViewTransform, x: number, y: number): [number, number] {
  return [view.panX + view.zoom * x, view.panY - view.zoom * y];
}

export function toDrawing(view: ViewTransform, sx: number, sy: number): [number, number] {
  return [(sx - view.panX) / view.zoom, (view.panY - sy) / view.zoom];
}

const SVG_NS = "http://www.w3.org/2000/svg";

function el<K extends keyof SVGElementTagNameMap>(
  tag: K, attrs: Record<string, string>): SVGElementTagNameMap[K] {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  return node;
}

export interface RenderCallbacks {
  onVertexDown(id: string, event: PointerEvent): void;
  onBendDown(edge: number, bend: number, event: PointerEvent): void;
  onEdgeDown(edge: number, event: PointerEvent): void;
}

export function renderScene(
  svg: SVGSVGElement,
  doc: DrawingDoc,
  view: ViewTransform,
  analysis: Analysis | null,
  selection: { vertex: string | null; edge: number | null },
  callbacks: RenderCallbacks,
): void {
  svg.replaceChildren();
  const positions = new Map<string, [number, number]>();
  for (const v of doc.vertices) {
    positions.set(v.id, toScreen(view, toNumber(v.x), toNumber(v.y)));
  }
  const badEdges = analysis ? violationEdgeIndices(analysis, doc) : new Set<number>();

  // edges under everything else
  doc.edges.forEach((edge, k) => {
    const pts = [
      positions.get(edge.u)!,
      ...edge.bends.map(([bx, by]) => toScreen(view, toNumber(bx), toNumber(by))),
      positions.get(edge.v)!,
    ];
    const polyline = el("polyline", {
      points: pts.map(([x, y]) => `${x},${y}`).join(" "),
      fill: "none",
      stroke: badEdges.has(k) ? "#e00000" : TAG_COLORS[edge.tag ?? ""] ?? "#000000",
      "stroke-width": badEdges.has(k) ? "3" : k === selection.edge ? "3" : "1.6",
      "stroke-dasharray": badEdges.has(k) ? "6 3" : "none",
      "data-edge": String(k),
      cursor: "pointer",
    });
    polyline.addEventListener("pointerdown", (ev) => callbacks.onEdgeDown(k, ev));
    svg.appendChild(polyline);
    edge.bends.forEach(([bx, by], b) => {
      const [sx, sy] = toScreen(view, toNumber(bx), toNumber(by));
      const handle = el("rect", {
        x: String(sx - 3.5),
        y: String(sy - 3.5),
        width: "7",
        height: "7",
        fill: "#ffffff",
        stroke: "#555555",
        cursor: "move",
      });
      handle.addEventListener("pointerdown", (ev) => callbacks.onBendDown(k, b, ev));
      svg.appendChild(handle);
    });
  });

  // triple circles from the core's counts
  if (analysis) {
    for (const c of tripleCircles(analysis)) {
      const [cx, cy] = toScreen(view, c.x, c.y);
      svg.appendChild(el("circle", {
        cx: String(cx),
        cy: String(cy),
        r: String(Math.max(c.radius * view.zoom, 9)),
        fill: "none",
        stroke: "#cc0000",
        "stroke-width": "2.5",
        "pointer-events": "none",
      }));
    }
    for (const violation of analysis.validation.violations) {
      if (!violation.point) continue;
      const [mx, my] = toScreen(
        view, toNumber(violation.point[0]), toNumber(violation.point[1]));
      svg.appendChild(el("circle", {
        cx: String(mx), cy: String(my), r: "7",
        fill: "none", stroke: "#e00000", "stroke-width": "2",
        "stroke-dasharray": "2 2", "pointer-events": "none",
      }));
    }
  }

  for (const v of doc.vertices) {
    const [sx, sy] = positions.get(v.id)!;
    const dot = el("circle", {
      cx: String(sx),
      cy: String(sy),
      r: v.id === selection.vertex ? "7" : "5.5",
      fill: v.id === selection.vertex ? "#2255cc" : "#1a1a1a",
      cursor: "move",
      "data-vertex": v.id,
    });
    dot.addEventListener("pointerdown", (ev) => callbacks.onVertexDown(v.id, ev));
    svg.appendChild(dot);
    svg.appendChild(
      Object.assign(el("text", {
        x: String(sx + 8),
        y: String(sy - 8),
        "font-size": "13",
        "font-family": "sans-serif",
        "pointer-events": "none",
      }), { textContent: v.id }));
  }
}
