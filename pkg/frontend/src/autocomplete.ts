// Debounced, latest-wins completion: at most one timer pending, stale
// responses are discarded by generation number, and the dropdown only ever
// shows labels the service returned.

import type { ApiClient, Candidate } from "./api";

export const DEBOUNCE_MS = 120; // spec ceiling is 150

export class Completer {
  private timer: ReturnType<typeof setTimeout> | null = null;
  private generation = 0;

  constructor(
    private api: ApiClient,
    private onResults: (candidates: Candidate[], query: string) => void,
    private limit = 20,
    private debounceMs = DEBOUNCE_MS,
  ) {}

  request(column: string, query: string): void {
    if (this.timer !== null) clearTimeout(this.timer);
    const generation = ++this.generation;
    this.timer = setTimeout(() => {
      this.timer = null;
      void this.api
        .complete(column, query, this.limit)
        .then((candidates) => {
          if (generation === this.generation) this.onResults(candidates, query);
        })
        .catch(() => {
          if (generation === this.generation) this.onResults([], query);
        });
    }, this.debounceMs);
  }

  cancel(): void {
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = null;
    this.generation++;
  }
}
