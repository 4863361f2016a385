// Cell coloring is a pure function of the statuses the service reported.
// No validation logic lives in the browser: green/red here must mean exactly
// what the CLI would say.

import type { CellStatus } from "./api";

export type CellColor = "green" | "red" | "neutral";

export function cellColor(statuses: CellStatus[]): CellColor {
  if (statuses.length === 0) return "neutral";
  if (statuses.every((s) => s.kind === "Empty")) return "neutral";
  const bad = statuses.some(
    (s) => s.kind === "Unknown" || s.kind === "OutOfRange" || s.kind === "Ambiguous",
  );
  if (bad) return "red";
  return statuses.every((s) => s.kind === "Resolved" || s.kind === "Empty") ? "green" : "neutral";
}

export function statusTooltip(statuses: CellStatus[]): string {
  return statuses
    .map((status) => {
      switch (status.kind) {
        case "Resolved":
          return `OK: ${status.iri}`;
        case "OutOfRange":
          return `outside the column range: ${status.iri}`;
        case "Unknown":
          return `no such term: ${status.text}`;
        case "Ambiguous":
          return `ambiguous, candidates: ${status.candidates.join(", ")}`;
        case "Empty":
          return "empty";
      }
    })
    .join("\n");
}
