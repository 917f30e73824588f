/** DOM wiring: toolbar, canvas interactions, status panel, file I/O. */

import { EditorDocument, STAGE_TAGS, StageTag } from "./model.js";
import { AnalysisClient } from "./api.js";
import { renderScene, toDrawing, ViewTransform } from "./render.js";
import { statusInfo, Analysis } from "./overlay.js";

type Mode = "select" | "vertex" | "edge" | "bend";

const doc = new EditorDocument();
const client = new AnalysisClient("");
let mode: Mode = "select";
let lastAnalysis: Analysis | null = null;
let analysisGeneration = -1;
let edgeStart: string | null = null;

const svg = document.getElementById("canvas") as unknown as SVGSVGElement;
const statusCount = document.getElementById("status-count")!;
const statusEdges = document.getElementById("status-edges")!;
const statusBanner = document.getElementById("status-banner")!;
const violationList = document.getElementById("violations")!;
const serviceBanner = document.getElementById("service-banner")!;
const retryButton = document.getElementById("retry") as HTMLButtonElement;

function view(): ViewTransform {
  return { panX: doc.view.panX, panY: doc.view.panY, zoom: doc.view.zoom };
}

// -- analysis plumbing --------------------------------------------------------

function requestAnalysis(immediate = false): void {
  const text = doc.serialize();
  if (immediate) {
    void client.analyzeNow(text, doc.generation);
  } else {
    client.scheduleAnalysis(text, doc.generation);
  }
}

client.onAnalysis = ({ generation, analysis }) => {
  if (generation < analysisGeneration) return;
  analysisGeneration = generation;
  lastAnalysis = analysis;
  serviceBanner.hidden = true;
  refresh(false);
};

client.onUnreachable = () => {
  serviceBanner.hidden = false;
};

retryButton.addEventListener("click", () => requestAnalysis(true));

// -- rendering ----------------------------------------------------------------

function refresh(reanalyze = true): void {
  const overlay = analysisGeneration === doc.generation ? lastAnalysis : null;
  renderScene(svg, doc.drawing, view(), overlay,
    { vertex: doc.selectedVertex, edge: doc.selectedEdge }, callbacks);
  renderStatus(overlay);
  if (reanalyze) requestAnalysis();
}

function renderStatus(analysis: Analysis | null): void {
  if (!analysis) {
    statusCount.textContent = "analyzing…";
    statusEdges.textContent = "";
    statusBanner.hidden = true;
    violationList.replaceChildren();
    return;
  }
  const info = statusInfo(analysis);
  statusCount.textContent = info.countText;
  statusEdges.textContent = info.edgeText + (info.incomplete ? " (incomplete)" : "");
  statusBanner.hidden = !info.optimalK11;
  violationList.replaceChildren(
    ...info.violationSummary.map((line) => {
      const li = document.createElement("li");
      li.textContent = line;
      return li;
    }));
}

// -- pointer interactions -------------------------------------------------------

interface DragState {
  kind: "vertex" | "bend" | "pan";
  id?: string;
  edge?: number;
  bend?: number;
  startX: number;
  startY: number;
  moved: boolean;
}

let drag: DragState | null = null;

function screenPoint(ev: PointerEvent): [number, number] {
  const rect = svg.getBoundingClientRect();
  return [ev.clientX - rect.left, ev.clientY - rect.top];
}

const callbacks = {
  onVertexDown(id: string, ev: PointerEvent) {
    ev.stopPropagation();
    if (mode === "edge") {
      if (edgeStart === null) {
        edgeStart = id;
        doc.selectedVertex = id;
      } else if (edgeStart !== id && !doc.hasEdge(edgeStart, id)) {
        doc.addEdge(edgeStart, id);
        edgeStart = null;
        doc.selectedVertex = null;
      } else {
        edgeStart = null;
        doc.selectedVertex = null;
      }
      refresh();
      return;
    }
    doc.selectedVertex = id;
    doc.selectedEdge = null;
    const [sx, sy] = screenPoint(ev);
    drag = { kind: "vertex", id, startX: sx, startY: sy, moved: false };
    refresh(false);
  },
  onBendDown(edge: number, bend: number, ev: PointerEvent) {
    ev.stopPropagation();
    doc.selectedEdge = edge;
    doc.selectedVertex = null;
    const [sx, sy] = screenPoint(ev);
    drag = { kind: "bend", edge, bend, startX: sx, startY: sy, moved: false };
    refresh(false);
  },
  onEdgeDown(edge: number, ev: PointerEvent) {
    ev.stopPropagation();
    if (mode === "bend") {
      const [sx, sy] = screenPoint(ev);
      const [x, y] = toDrawing(view(), sx, sy);
      const bends = doc.drawing.edges[edge].bends.length;
      doc.insertBend(edge, bends, x, y);
      doc.selectedEdge = edge;
      refresh();
      return;
    }
    doc.selectedEdge = edge;
    doc.selectedVertex = null;
    refresh(false);
  },
};

svg.addEventListener("pointerdown", (ev) => {
  const [sx, sy] = screenPoint(ev);
  if (mode === "vertex") {
    const [x, y] = toDrawing(view(), sx, sy);
    doc.addVertex(x, y);
    refresh();
    return;
  }
  doc.selectedVertex = null;
  doc.selectedEdge = null;
  edgeStart = null;
  drag = { kind: "pan", startX: sx, startY: sy, moved: false };
  refresh(false);
});

svg.addEventListener("pointermove", (ev) => {
  if (!drag) return;
  const [sx, sy] = screenPoint(ev);
  if (Math.abs(sx - drag.startX) + Math.abs(sy - drag.startY) > 2) drag.moved = true;
  if (!drag.moved) return;
  if (drag.kind === "pan") {
    doc.view.panX += sx - drag.startX;
    doc.view.panY += sy - drag.startY;
    drag.startX = sx;
    drag.startY = sy;
    refresh(false);
    return;
  }
  const [x, y] = toDrawing(view(), sx, sy);
  if (drag.kind === "vertex" && drag.id) {
    doc.moveVertex(drag.id, x, y);
  } else if (drag.kind === "bend" && drag.edge !== undefined && drag.bend !== undefined) {
    doc.moveBend(drag.edge, drag.bend, x, y);
  }
  refresh();
});

window.addEventListener("pointerup", () => {
  drag = null;
});

svg.addEventListener("wheel", (ev) => {
  ev.preventDefault();
  const factor = ev.deltaY < 0 ? 1.15 : 1 / 1.15;
  const [sx, sy] = screenPoint(ev as unknown as PointerEvent);
  const [x, y] = toDrawing(view(), sx, sy);
  doc.view.zoom *= factor;
  doc.view.panX = sx - doc.view.zoom * x;
  doc.view.panY = sy + doc.view.zoom * y;
  refresh(false);
});

// -- toolbar --------------------------------------------------------------------

for (const button of document.querySelectorAll<HTMLButtonElement>("[data-mode]")) {
  button.addEventListener("click", () => {
    mode = button.dataset.mode as Mode;
    edgeStart = null;
    for (const other of document.querySelectorAll("[data-mode]")) {
      other.classList.toggle("active", other === button);
    }
  });
}

const tagSelect = document.getElementById("stage-tag") as HTMLSelectElement;
for (const tag of STAGE_TAGS) {
  const option = document.createElement("option");
  option.value = tag;
  option.textContent = tag;
  tagSelect.appendChild(option);
}
tagSelect.addEventListener("change", () => {
  doc.stageTag = tagSelect.value as StageTag;
});

document.getElementById("apply-tag")!.addEventListener("click", () => {
  if (doc.selectedEdge !== null) {
    doc.setEdgeTag(doc.selectedEdge, tagSelect.value as StageTag);
    refresh();
  }
});

document.getElementById("delete")!.addEventListener("click", deleteSelection);
document.getElementById("undo")!.addEventListener("click", () => {
  if (doc.undo()) refresh();
});
document.getElementById("redo")!.addEventListener("click", () => {
  if (doc.redo()) refresh();
});

function deleteSelection(): void {
  if (doc.selectedVertex !== null) {
    doc.deleteVertex(doc.selectedVertex);
    refresh();
  } else if (doc.selectedEdge !== null) {
    doc.deleteEdge(doc.selectedEdge);
    refresh();
  }
}

window.addEventListener("keydown", (ev) => {
  if (ev.target instanceof HTMLInputElement || ev.target instanceof HTMLSelectElement) return;
  if ((ev.ctrlKey || ev.metaKey) && ev.key.toLowerCase() === "z") {
    ev.preventDefault();
    if (ev.shiftKey ? doc.redo() : doc.undo()) refresh();
  } else if ((ev.ctrlKey || ev.metaKey) && ev.key.toLowerCase() === "y") {
    ev.preventDefault();
    if (doc.redo()) refresh();
  } else if (ev.key === "Delete" || ev.key === "Backspace") {
    deleteSelection();
  }
});

// -- file I/O ---------------------------------------------------------------------

function download(name: string, text: string, type: string): void {
  const blob = new Blob([text], { type });
  const url = URL.createObjectURL(blob);
  const a = document.createElement("a");
  a.href = url;
  a.download = name;
  a.click();
  URL.revokeObjectURL(url);
}

document.getElementById("save")!.addEventListener("click", () => {
  download("drawing.json", doc.serialize(), "application/json");
});

document.getElementById("export-svg")!.addEventListener("click", () => {
  client.exportSvg(doc.serialize())
    .then((text) => download("drawing.svg", text, "image/svg+xml"))
    .catch(() => { serviceBanner.hidden = false; });
});

const fileInput = document.getElementById("load") as HTMLInputElement;
fileInput.addEventListener("change", async () => {
  const file = fileInput.files?.[0];
  if (!file) return;
  try {
    doc.load(await file.text());
    lastAnalysis = null;
    analysisGeneration = -1;
    fitView();
    refresh();
    requestAnalysis(true);
  } catch (err) {
    alert(`could not load: ${err}`);
  }
  fileInput.value = "";
});

function fitView(): void {
  const { vertices } = doc.drawing;
  if (!vertices.length) return;
  const xs = vertices.map((v) => Number(v.x.split("/")[0]) / Number(v.x.split("/")[1] ?? 1));
  const ys = vertices.map((v) => Number(v.y.split("/")[0]) / Number(v.y.split("/")[1] ?? 1));
  const rect = svg.getBoundingClientRect();
  const spanX = Math.max(...xs) - Math.min(...xs) || 1;
  const spanY = Math.max(...ys) - Math.min(...ys) || 1;
  doc.view.zoom = 0.8 * Math.min(rect.width / spanX, rect.height / spanY);
  doc.view.panX = rect.width / 2 - doc.view.zoom * (Math.min(...xs) + spanX / 2);
  doc.view.panY = rect.height / 2 + doc.view.zoom * (Math.min(...ys) + spanY / 2);
}

// -- boot -------------------------------------------------------------------------

client.health().then(() => {
  serviceBanner.hidden = true;
}).catch(() => {
  serviceBanner.hidden = false;
});
refresh();
