// Grid acceptance: A5 red and everything else green purely from intercepted
// service statuses; typing shows exactly the service's candidates; committing
// a selection turns the cell green with no page reload.

import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api";
import { GridController } from "../src/grid";
import { stubService, cellnucTemplate } from "./helpers";

const wait = (ms: number) => new Promise((resolve) => setTimeout(resolve, ms));
const DEBOUNCE_SETTLE = 200;

function mount(): HTMLElement {
  document.body.innerHTML = '<div id="app"></div>';
  return document.getElementById("app") as HTMLElement;
}

async function loadedGrid(options = {}) {
  const service = stubService(options);
  const grid = new GridController(mount(), new ApiClient(service.http));
  await grid.load();
  return { grid, service };
}

describe("grid rendering", () => {
  it("renders six rows and twelve cells from the template", async () => {
    const { grid } = await loadedGrid();
    const cells = document.querySelectorAll("td.cell");
    expect(cells.length).toBe(12);
    expect(grid.cellElement(0, 0).textContent).toBe("Mononuclear Phagocyte");
  });

  it("colors A5 red and every other populated cell green, from statuses alone", async () => {
    const { grid } = await loadedGrid();
    for (let row = 0; row < 6; row++) {
      for (let col = 0; col < 2; col++) {
        const td = grid.cellElement(row, col);
        if (row === 4 && col === 0) {
          expect(td.classList.contains("red")).toBe(true);
        } else {
          expect(td.classList.contains("green")).toBe(true);
        }
      }
    }
  });

  it("renders header plus one blank row for an empty table", async () => {
    const { grid } = await loadedGrid({ template: cellnucTemplate([]) });
    expect(document.querySelectorAll("th").length).toBe(2);
    expect(document.querySelectorAll("tbody tr").length).toBe(1);
    expect(grid.cellElement(0, 0).classList.contains("neutral")).toBe(true);
  });

  it("shows a retry banner when the service is unreachable", async () => {
    const api = new ApiClient(async () => {
      throw new Error("connection refused");
    });
    const grid = new GridController(mount(), api);
    await grid.load();
    expect(document.querySelector(".banner")?.textContent).toContain("service unreachable");
    expect(document.querySelector(".banner button")).not.toBeNull();
  });

  it("moves focus with arrow keys", async () => {
    const { grid } = await loadedGrid();
    const first = grid.cellElement(0, 0);
    first.focus();
    first.dispatchEvent(new KeyboardEvent("keydown", { key: "ArrowRight", bubbles: true }));
    expect(document.activeElement).toBe(grid.cellElement(0, 1));
    grid.cellElement(0, 1).dispatchEvent(
      new KeyboardEvent("keydown", { key: "ArrowDown", bubbles: true }),
    );
    expect(document.activeElement).toBe(grid.cellElement(1, 1));
  });
});

describe("editing and autocomplete", () => {
  it("typing 'mo' shows exactly the service's candidates", async () => {
    const { grid, service } = await loadedGrid();
    grid.beginEdit(5, 1);
    const input = document.querySelector("td input") as HTMLInputElement;
    input.value = "mo";
    input.setSelectionRange(2, 2);
    input.dispatchEvent(new Event("input", { bubbles: true }));
    await wait(DEBOUNCE_SETTLE);
    const labels = Array.from(document.querySelectorAll(".dropdown li")).map(
      (li) => li.textContent,
    );
    expect(labels).toEqual(["mononucleate"]);
    const completions = service.calls.filter((c) => c.url.startsWith("/complete"));
    expect(completions[completions.length - 1].url).toContain("q=mo");
  });

  it("committing a selection turns the cell green without a reload", async () => {
    const { grid, service } = await loadedGrid();
    const templateFetches = () =>
      service.calls.filter((c) => c.url.startsWith("/template")).length;
    const before = templateFetches();

    grid.beginEdit(4, 0); // the red A5 cell
    const input = document.querySelector("td input") as HTMLInputElement;
    input.value = "epithelial cell";
    input.dispatchEvent(new KeyboardEvent("keydown", { key: "Enter", bubbles: true }));
    await wait(50);

    const td = grid.cellElement(4, 0);
    expect(td.classList.contains("green")).toBe(true);
    expect(td.textContent).toBe("epithelial cell");
    expect(templateFetches()).toBe(before); // no page reload, no refetch
  });

  it("obeys the service even when it blesses arbitrary text", async () => {
    const { grid } = await loadedGrid({ blessEverything: true });
    grid.beginEdit(0, 0);
    const input = document.querySelector("td input") as HTMLInputElement;
    input.value = "definitely not a term";
    await grid.commit();
    expect(grid.cellElement(0, 0).classList.contains("green")).toBe(true);
  });

  it("keeps the cell in editing state with a marker when the POST fails", async () => {
    const { grid } = await loadedGrid({ failCells: true });
    grid.beginEdit(0, 0);
    const input = document.querySelector("td input") as HTMLInputElement;
    input.value = "hepatocyte";
    await grid.commit();
    const still = document.querySelector("td input") as HTMLInputElement;
    expect(still).not.toBeNull();
    expect(still.classList.contains("commit-failed")).toBe(true);
    expect(still.value).toBe("hepatocyte");
  });

  it("multi-value editing scopes completion to the active segment", async () => {
    const template = cellnucTemplate();
    template.descriptor.columns[1].multiValued = true;
    const { grid, service } = await loadedGrid({ template });
    grid.beginEdit(0, 1);
    const input = document.querySelector("td input") as HTMLInputElement;
    input.value = "mononucleate, bi";
    input.setSelectionRange(input.value.length, input.value.length);
    input.dispatchEvent(new Event("input", { bubbles: true }));
    await wait(DEBOUNCE_SETTLE);
    const last = service.calls.filter((c) => c.url.startsWith("/complete")).pop();
    expect(last?.url).toContain("q=bi");
    const labels = Array.from(document.querySelectorAll(".dropdown li")).map(
      (li) => li.textContent,
    );
    expect(labels).toEqual(["binucleate"]);
  });
});
