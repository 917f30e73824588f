import { describe, expect, it } from "vitest";

import { AnalysisClient } from "../src/api.js";
import type { Analysis } from "../src/overlay.js";

function fakeAnalysis(marker: number): Analysis {
  return {
    n: marker, e: 0,
    validation: { is_valid: true, violations: [] },
    bounds: { best_integer_lower_bound: 0, eq1: "0" },
    crossing_pair_count: 0, triple_count: 0, triples: [], crossings: [],
  };
}

function fetchStub(responder: (url: string, body: string) => Promise<Analysis>) {
  return (async (url: string, init?: RequestInit) => {
    const analysis = await responder(url, String(init?.body ?? ""));
    return {
      ok: true,
      status: 200,
      json: async () => analysis,
      text: async () => JSON.stringify(analysis),
    };
  }) as unknown as typeof fetch;
}

describe("analysis client sequencing", () => {
  it("applies responses in generation order and drops stale ones", async () => {
    const resolvers = new Map<number, (a: Analysis) => void>();
    const client = new AnalysisClient("", fetchStub((_url, body) => {
      const generation = JSON.parse(body).generation;
      return new Promise((resolve) => resolvers.set(generation, resolve));
    }), 0);

    const applied: number[] = [];
    client.onAnalysis = ({ generation }) => applied.push(generation);

    const g1 = client.analyzeNow(JSON.stringify({ generation: 1 }), 1);
    const g2 = client.analyzeNow(JSON.stringify({ generation: 2 }), 2);
    // the response for the superseded generation 1 arrives late
    resolvers.get(2)!(fakeAnalysis(2));
    await g2;
    resolvers.get(1)!(fakeAnalysis(1));
    await g1;
    expect(applied).toEqual([2]);
  });

  it("ignores requests for generations not newer than the last", async () => {
    let calls = 0;
    const client = new AnalysisClient("", fetchStub(async () => {
      calls += 1;
      return fakeAnalysis(calls);
    }), 0);
    await client.analyzeNow("{}", 3);
    await client.analyzeNow("{}", 3);
    await client.analyzeNow("{}", 2);
    expect(calls).toBe(1);
  });

  it("debounces bursts of edits", async () => {
    let calls = 0;
    const client = new AnalysisClient("", fetchStub(async () => {
      calls += 1;
      return fakeAnalysis(calls);
    }), 5);
    client.scheduleAnalysis("{}", 1);
    client.scheduleAnalysis("{}", 2);
    client.scheduleAnalysis("{}", 3);
    await new Promise((resolve) => setTimeout(resolve, 40));
    expect(calls).toBe(1);
  });

  it("reports unreachable services", async () => {
    const failing = (async () => {
      throw new Error("connection refused");
    }) as unknown as typeof fetch;
    const client = new AnalysisClient("", failing, 0);
    let unreachable = 0;
    client.onUnreachable = () => unreachable++;
    await client.analyzeNow("{}", 1);
    expect(unreachable).toBe(1);
  });
});
