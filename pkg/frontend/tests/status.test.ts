import { describe, expect, it } from "vitest";

import type { CellStatus } from "../src/api";
import { cellColor } from "../src/status";

const resolved: CellStatus = { kind: "Resolved", iri: "http://x/1" };
const unknown: CellStatus = { kind: "Unknown", text: "nope" };
const outOfRange: CellStatus = { kind: "OutOfRange", iri: "http://x/2" };
const ambiguous: CellStatus = { kind: "Ambiguous", candidates: ["http://x/1", "http://x/2"] };
const empty: CellStatus = { kind: "Empty" };

describe("cellColor", () => {
  it("is green when every value resolved", () => {
    expect(cellColor([resolved])).toBe("green");
    expect(cellColor([resolved, resolved])).toBe("green");
  });

  it("is red when any value is unknown, out of range, or ambiguous", () => {
    expect(cellColor([unknown])).toBe("red");
    expect(cellColor([resolved, outOfRange])).toBe("red");
    expect(cellColor([resolved, ambiguous])).toBe("red");
  });

  it("is neutral for empty cells", () => {
    expect(cellColor([empty])).toBe("neutral");
    expect(cellColor([])).toBe("neutral");
  });

  it("depends only on the statuses given", () => {
    // same input, same color: no hidden state, no client-side validation
    const input: CellStatus[] = [resolved, unknown];
    expect(cellColor(input)).toBe(cellColor([...input]));
  });
});
