import { describe, expect, it } from "vitest";
import { readFileSync } from "node:fs";
import { join } from "node:path";

import { parseDrawing } from "../src/model.js";
import {
  Analysis,
  statusInfo,
  tripleCircles,
  violationEdgeIndices,
} from "../src/overlay.js";

const fixture = (name: string) =>
  JSON.parse(readFileSync(join(__dirname, "fixtures", name), "utf-8"));

describe("convex K6 fixture (captured from the live service)", () => {
  const analysis: Analysis = fixture("k6_analysis.json");

  it("shows exactly one red circle", () => {
    const circles = tripleCircles(analysis);
    expect(circles).toHaveLength(1);
    expect(circles[0].radius).toBeGreaterThan(0);
  });

  it("status reads 1 / lower bound 0", () => {
    const info = statusInfo(analysis);
    expect(info.countText).toBe("1 / lower bound 0");
    expect(info.valid).toBe(true);
    expect(info.optimalK11).toBe(false);
    expect(info.edgeText).toBe("15/15 edges");
    expect(info.incomplete).toBe(false);
  });
});

describe("double crossing fixture", () => {
  const analysis: Analysis = fixture("double_crossing_analysis.json");

  it("flags MultipleMeetings on both edges", () => {
    expect(analysis.validation.is_valid).toBe(false);
    expect(analysis.validation.violations[0].kind).toBe("multiple_meetings");
    const doc = parseDrawing(JSON.stringify({
      format_version: 1,
      vertices: [
        { id: "a", x: "0", y: "0" }, { id: "b", x: "4", y: "0" },
        { id: "c", x: "1", y: "1" }, { id: "d", x: "3", y: "1" }],
      edges: [
        { u: "a", v: "b", bends: [] },
        { u: "c", v: "d", bends: [["2", "-1"]] }],
    }));
    expect(violationEdgeIndices(analysis, doc)).toEqual(new Set([0, 1]));
  });

  it("status shows not simple", () => {
    const info = statusInfo(analysis);
    expect(info.countText).toBe("not simple");
    expect(info.violationSummary[0]).toMatch(/multiple_meetings/);
  });
});

describe("K11 optimality banner", () => {
  function k11Analysis(count: number, e = 55): Analysis {
    return {
      n: 11,
      e,
      validation: { is_valid: true, violations: [] },
      bounds: fixture("bounds_k11.json"),
      crossing_pair_count: 100,
      triple_count: count,
      triples: [],
      crossings: [],
    };
  }

  it("triggers exactly at n=11, e=55, count=4", () => {
    const info = statusInfo(k11Analysis(4));
    expect(info.optimalK11).toBe(true);
    expect(info.countText).toBe("4 / lower bound 4 — optimal");
  });

  it("stays off for other counts", () => {
    expect(statusInfo(k11Analysis(5)).optimalK11).toBe(false);
    expect(statusInfo(k11Analysis(5)).countText).toBe("5 / lower bound 4");
  });

  it("stays off for incomplete K11", () => {
    const info = statusInfo(k11Analysis(4, 54));
    expect(info.optimalK11).toBe(false);
    expect(info.incomplete).toBe(true);
    expect(info.edgeText).toBe("54/55 edges");
  });

  it("stays off for other graphs even when count equals the bound", () => {
    const analysis: Analysis = {
      n: 10, e: 45,
      validation: { is_valid: true, violations: [] },
      bounds: { best_integer_lower_bound: 0, eq1: "0" },
      crossing_pair_count: 0, triple_count: 0, triples: [], crossings: [],
    };
    expect(statusInfo(analysis).optimalK11).toBe(false);
  });
});
