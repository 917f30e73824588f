/** The editor document: the drawing file plus view state and undo/redo.
 *
 * Geometry is never computed here; every verdict about the drawing comes
 * from the analysis service.  Mutations snapshot the serialized document,
 * so undo/redo restores byte-identical files; every mutation bumps the
 * generation counter used to discard stale analysis responses.
 */

import { latticeToRational, snapToLattice, isRational } from "./rational.js";

export interface DrawingVertex {
  id: string;
  x: string;
  y: string;
}

export interface DrawingEdge {
  u: string;
  v: string;
  bends: [string, string][];
  tag?: string;
}

export interface DrawingDoc {
  format_version: 1;
  vertices: DrawingVertex[];
  edges: DrawingEdge[];
}

export const STAGE_TAGS = ["initial", "pink", "darkblue", "final"] as const;
export type StageTag = (typeof STAGE_TAGS)[number];

export interface ViewState {
  panX: number;
  panY: number;
  zoom: number;
}

export function emptyDrawing(): DrawingDoc {
  return { format_version: 1, vertices: [], edges: [] };
}

export function serializeDrawing(doc: DrawingDoc): string {
  const body = {
    format_version: doc.format_version,
    vertices: doc.vertices.map((v) => ({ id: v.id, x: v.x, y: v.y })),
    edges: doc.edges.map((e) => ({
      u: e.u,
      v: e.v,
      bends: e.bends.map((b) => [b[0], b[1]]),
      ...(e.tag !== undefined ? { tag: e.tag } : {}),
    })),
  };
  return JSON.stringify(body, null, 2) + "\n";
}

export function parseDrawing(text: string): DrawingDoc {
  const raw = JSON.parse(text);
  if (raw.format_version !== 1) throw new Error("unsupported format_version");
  const ids = new Set<string>();
  const vertices: DrawingVertex[] = raw.vertices.map((v: any) => {
    if (typeof v.id !== "string" || ids.has(v.id)) throw new Error(`bad vertex id ${v.id}`);
    ids.add(v.id);
    const x = String(v.x);
    const y = String(v.y);
    if (!isRational(x) || !isRational(y)) throw new Error(`bad coordinate on ${v.id}`);
    return { id: v.id, x, y };
  });
  const edges: DrawingEdge[] = raw.edges.map((e: any) => {
    if (!ids.has(e.u) || !ids.has(e.v)) throw new Error(`unknown endpoint on ${e.u}-${e.v}`);
    const bends = (e.bends ?? []).map((b: any) => {
      const bx = String(b[0]);
      const by = String(b[1]);
      if (!isRational(bx) || !isRational(by)) throw new Error("bad bend coordinate");
      return [bx, by] as [string, string];
    });
    return { u: e.u, v: e.v, bends, ...(e.tag != null ? { tag: String(e.tag) } : {}) };
  });
  return { format_version: 1, vertices, edges };
}

export class EditorDocument {
  private doc: DrawingDoc = emptyDrawing();
  private undoStack: string[] = [];
  private redoStack: string[] = [];
  generation = 0;
  stageTag: StageTag = "initial";
  view: ViewState = { panX: 0, panY: 0, zoom: 60 };
  selectedVertex: string | null = null;
  selectedEdge: number | null = null;

  get drawing(): DrawingDoc {
    return this.doc;
  }

  serialize(): string {
    return serializeDrawing(this.doc);
  }

  load(text: string): void {
    this.doc = parseDrawing(text);
    this.undoStack = [];
    this.redoStack = [];
    this.selectedVertex = null;
    this.selectedEdge = null;
    this.generation++;
  }

  private mutate(change: (doc: DrawingDoc) => void): void {
    this.undoStack.push(this.serialize());
    this.redoStack = [];
    change(this.doc);
    this.generation++;
  }

  undo(): boolean {
    const snapshot = this.undoStack.pop();
    if (snapshot === undefined) return false;
    this.redoStack.push(this.serialize());
    this.doc = parseDrawing(snapshot);
    this.generation++;
    return true;
  }

  redo(): boolean {
    const snapshot = this.redoStack.pop();
    if (snapshot === undefined) return false;
    this.undoStack.push(this.serialize());
    this.doc = parseDrawing(snapshot);
    this.generation++;
    return true;
  }

  // -- edit actions (coordinates in drawing space, snapped to the lattice)

  private freshId(): string {
    let k = 1;
    const used = new Set(this.doc.vertices.map((v) => v.id));
    while (used.has(String(k))) k++;
    return String(k);
  }

  addVertex(x: number, y: number): string {
    const id = this.freshId();
    const vx = latticeToRational(snapToLattice(x));
    const vy = latticeToRational(snapToLattice(y));
    this.mutate((doc) => doc.vertices.push({ id, x: vx, y: vy }));
    return id;
  }

  moveVertex(id: string, x: number, y: number): void {
    this.mutate((doc) => {
      const v = doc.vertices.find((v) => v.id === id);
      if (!v) throw new Error(`no vertex ${id}`);
      v.x = latticeToRational(snapToLattice(x));
      v.y = latticeToRational(snapToLattice(y));
    });
  }

  deleteVertex(id: string): void {
    this.mutate((doc) => {
      doc.vertices = doc.vertices.filter((v) => v.id !== id);
      doc.edges = doc.edges.filter((e) => e.u !== id && e.v !== id);
    });
    if (this.selectedVertex === id) this.selectedVertex = null;
    this.selectedEdge = null;
  }

  hasEdge(u: string, v: string): boolean {
    return this.doc.edges.some(
      (e) => (e.u === u && e.v === v) || (e.u === v && e.v === u));
  }

  addEdge(u: string, v: string): number {
    if (u === v) throw new Error("loop edge");
    if (this.hasEdge(u, v)) throw new Error(`duplicate edge ${u}-${v}`);
    this.mutate((doc) => doc.edges.push({ u, v, bends: [], tag: this.stageTag }));
    return this.doc.edges.length - 1;
  }

  deleteEdge(index: number): void {
    this.mutate((doc) => doc.edges.splice(index, 1));
    this.selectedEdge = null;
  }

  setEdgeTag(index: number, tag: StageTag): void {
    this.mutate((doc) => {
      doc.edges[index].tag = tag;
    });
  }

  insertBend(edgeIndex: number, bendIndex: number, x: number, y: number): void {
    const bend: [string, string] = [
      latticeToRational(snapToLattice(x)),
      latticeToRational(snapToLattice(y)),
    ];
    this.mutate((doc) => doc.edges[edgeIndex].bends.splice(bendIndex, 0, bend));
  }

  moveBend(edgeIndex: number, bendIndex: number, x: number, y: number): void {
    this.mutate((doc) => {
      doc.edges[edgeIndex].bends[bendIndex] = [
        latticeToRational(snapToLattice(x)),
        latticeToRational(snapToLattice(y)),
      ];
    });
  }

  deleteBend(edgeIndex: number, bendIndex: number): void {
    this.mutate((doc) => doc.edges[edgeIndex].bends.splice(bendIndex, 1));
  }
}
