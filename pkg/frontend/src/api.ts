/** Client for the local analysis service.
 *
 * Edits arrive much faster than analyses should be dispatched, so
 * requests are debounced; every request carries the document generation
 * that produced it and responses for superseded generations are dropped,
 * so the UI never shows counts for a document the user has already
 * changed.
 */

import type { Analysis } from "./overlay.js";

export type FetchLike = typeof fetch;

export interface AnalysisUpdate {
  generation: number;
  analysis: Analysis;
}

export class AnalysisClient {
  onAnalysis: (update: AnalysisUpdate) => void = () => {};
  onUnreachable: (err: unknown) => void = () => {};

  private timer: ReturnType<typeof setTimeout> | null = null;
  private latestRequested = -1;
  private latestApplied = -1;

  constructor(
    private baseUrl: string,
    private fetchImpl: FetchLike = fetch,
    private debounceMs = 150,
  ) {}

  /** Debounced analysis of the serialized document. */
  scheduleAnalysis(documentText: string, generation: number): void {
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = setTimeout(() => {
      this.timer = null;
      void this.analyzeNow(documentText, generation);
    }, this.debounceMs);
  }

  async analyzeNow(documentText: string, generation: number): Promise<void> {
    if (generation <= this.latestRequested) return; // an equal/newer request exists
    this.latestRequested = generation;
    try {
      const resp = await this.fetchImpl(`${this.baseUrl}/api/analyze`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: documentText,
      });
      if (!resp.ok) throw new Error(`analyze failed: ${resp.status}`);
      const analysis = (await resp.json()) as Analysis;
      if (generation !== this.latestRequested || generation <= this.latestApplied) {
        return; // superseded while in flight
      }
      this.latestApplied = generation;
      this.onAnalysis({ generation, analysis });
    } catch (err) {
      this.onUnreachable(err);
    }
  }

  async health(): Promise<{ name: string; version: string }> {
    const resp = await this.fetchImpl(`${this.baseUrl}/api/health`);
    if (!resp.ok) throw new Error(`health failed: ${resp.status}`);
    return (await resp.json()) as { name: string; version: string };
  }

  async exportSvg(documentText: string): Promise<string> {
    const resp = await this.fetchImpl(`${this.baseUrl}/api/svg`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: documentText,
    });
    if (!resp.ok) throw new Error(`svg export failed: ${resp.status}`);
    return await resp.text();
  }
}
