// Pattern wizard: select rows, map variables to columns, review violations
// and minting, then expand and download. The preview step is reachable only
// when the service reports zero check violations, and pending mints must be
// confirmed first. Downloads carry the service bytes untouched.

import { ApiClient, ApiError, CellStatus, ExpandResponse, TemplateResponse } from "./api";

export type WizardStep = "selectRows" | "mapVariables" | "review" | "preview";

export interface PendingMint {
  label: string;
  row: number;
  column: string;
}

export type SaveFile = (filename: string, content: string, mime: string) => void;

export function browserSaveFile(filename: string, content: string, mime: string): void {
  const blob = new Blob([content], { type: mime });
  const url = URL.createObjectURL(blob);
  const anchor = document.createElement("a");
  anchor.href = url;
  anchor.download = filename;
  anchor.click();
  URL.revokeObjectURL(url);
}

/** Variable declarations, scraped from the pattern text for the mapping UI.
 * Presentation only: the service's checker is the authority and any miss
 * comes back as a 409 at the review step. */
export function baseVariables(patternText: string): string[] {
  const head = patternText.split(/\bBEGIN\b/i)[0];
  const names: string[] = [];
  const decl = /\?([A-Za-z_][A-Za-z0-9_]*)\s*:\s*[A-Za-z]+\s*(=?)/g;
  let match;
  while ((match = decl.exec(head)) !== null) {
    if (match[2] !== "=" && !names.includes(match[1])) names.push(match[1]);
  }
  return names;
}

export class Wizard {
  step: WizardStep = "selectRows";
  patternTexts: string[] = [];
  rowFrom = 0;
  rowTo = 0;
  binding: Record<string, string> = {};
  violations: string[] = [];
  mintsConfirmed = false;
  stepError = "";
  result: ExpandResponse | null = null;

  constructor(
    private api: ApiClient,
    private template: TemplateResponse,
    private saveFile: SaveFile = browserSaveFile,
  ) {
    this.rowTo = Math.max(template.table.rows.length - 1, 0);
  }

  columns(): string[] {
    return this.template.table.header.slice();
  }

  variables(): string[] {
    const names: string[] = [];
    for (const text of this.patternTexts) {
      for (const name of baseVariables(text)) {
        if (!names.includes(name)) names.push(name);
      }
    }
    return names;
  }

  selectedRows(): number[] {
    const rows: number[] = [];
    for (let row = this.rowFrom; row <= this.rowTo; row++) rows.push(row);
    return rows;
  }

  /** Unknown values in mintable columns among the selected rows: these will
   * be assigned new identifiers and need an explicit go-ahead. */
  pendingMints(): PendingMint[] {
    const mints: PendingMint[] = [];
    const mintable = new Set(
      this.template.descriptor.columns.filter((c) => c.mintUnknown).map((c) => c.name),
    );
    for (const row of this.selectedRows()) {
      this.template.table.header.forEach((column, col) => {
        if (!mintable.has(column)) return;
        const statuses: CellStatus[] = this.template.statuses[row]?.[col] ?? [];
        for (const status of statuses) {
          if (status.kind === "Unknown") mints.push({ label: status.text, row, column });
        }
      });
    }
    return mints;
  }

  // step transitions -------------------------------------------------------

  canLeaveSelectRows(): string {
    if (this.patternTexts.length === 0 || this.patternTexts.every((t) => !t.trim())) {
      return "enter or upload at least one pattern";
    }
    const last = Math.max(this.template.table.rows.length - 1, 0);
    if (this.rowFrom < 0 || this.rowTo < this.rowFrom || this.rowTo > last) {
      return `row range must lie within 0..${last}`;
    }
    return "";
  }

  unmappedVariables(): string[] {
    return this.variables().filter((name) => !this.binding[name]);
  }

  async next(): Promise<void> {
    this.stepError = "";
    switch (this.step) {
      case "selectRows": {
        const problem = this.canLeaveSelectRows();
        if (problem) {
          this.stepError = problem;
          return;
        }
        this.step = "mapVariables";
        return;
      }
      case "mapVariables": {
        const unmapped = this.unmappedVariables();
        if (unmapped.length > 0) {
          this.stepError = `map every variable to a column (missing: ${unmapped.join(", ")})`;
          return;
        }
        this.step = "review";
        return;
      }
      case "review": {
        if (this.pendingMints().length > 0 && !this.mintsConfirmed) {
          this.stepError = "confirm the new identifiers before generating";
          return;
        }
        try {
          this.result = await this.api.expand({
            patterns: this.patternTexts.filter((t) => t.trim()),
            binding: this.binding,
            rows: this.selectedRows(),
          });
        } catch (error) {
          if (error instanceof ApiError && error.status === 409) {
            this.violations = error.violations;
            this.stepError = "the pattern check reported violations";
          } else {
            this.stepError = String(error);
          }
          return; // preview is unreachable while violations stand
        }
        this.violations = [];
        this.step = "preview";
        return;
      }
      case "preview":
        return;
    }
  }

  back(): void {
    const order: WizardStep[] = ["selectRows", "mapVariables", "review", "preview"];
    const index = order.indexOf(this.step);
    if (index > 0) this.step = order[index - 1];
    this.stepError = "";
  }

  // downloads ---------------------------------------------------------------

  downloadManchester(): void {
    if (this.result) this.saveFile("ontology.omn", this.result.manchester, "text/plain");
  }

  downloadFunctional(): void {
    if (this.result) this.saveFile("ontology.ofn", this.result.functional, "text/plain");
  }

  downloadReport(): void {
    if (this.result) this.saveFile("report.csv", this.result.report, "text/csv");
  }
}
