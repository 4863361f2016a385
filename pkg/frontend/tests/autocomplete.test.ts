import { describe, expect, it } from "vitest";

import { ApiClient, Candidate } from "../src/api";
import { Completer } from "../src/autocomplete";

function apiWith(handler: (query: string) => Promise<Candidate[]>): ApiClient {
  const api = new ApiClient();
  api.complete = (_column: string, query: string) => handler(query);
  return api;
}

const wait = (ms: number) => new Promise((resolve) => setTimeout(resolve, ms));

describe("Completer", () => {
  it("debounces: only the last keystroke queries", async () => {
    const queries: string[] = [];
    const api = apiWith(async (q) => {
      queries.push(q);
      return [{ iri: "i", label: q }];
    });
    const results: string[][] = [];
    const completer = new Completer(api, (candidates) => {
      results.push(candidates.map((c) => c.label));
    }, 20, 10);
    completer.request("Nucleation", "m");
    completer.request("Nucleation", "mo");
    await wait(40);
    expect(queries).toEqual(["mo"]);
    expect(results).toEqual([["mo"]]);
  });

  it("discards stale responses (latest wins)", async () => {
    let release: () => void = () => {};
    const slowFirst = new Promise<void>((resolve) => {
      release = resolve;
    });
    const api = apiWith(async (q) => {
      if (q === "slow") {
        await slowFirst;
        return [{ iri: "s", label: "slow result" }];
      }
      return [{ iri: "f", label: "fast result" }];
    });
    const seen: string[][] = [];
    const completer = new Completer(api, (candidates) => {
      seen.push(candidates.map((c) => c.label));
    }, 20, 1);
    completer.request("X", "slow");
    await wait(10); // slow request is in flight
    completer.request("X", "fast");
    await wait(10);
    release();
    await wait(10);
    expect(seen).toEqual([["fast result"]]);
  });

  it("cancel drops pending work", async () => {
    const api = apiWith(async () => [{ iri: "i", label: "x" }]);
    const seen: string[][] = [];
    const completer = new Completer(api, (c) => seen.push(c.map((x) => x.label)), 20, 5);
    completer.request("X", "a");
    completer.cancel();
    await wait(20);
    expect(seen).toEqual([]);
  });
});
