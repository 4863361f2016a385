// A canned cell/nucleation service: the template mirrors the six-row fixture
// (one unknown at spreadsheet cell A5), completions and cell updates answer
// from a label table. Tests intercept all transport through ApiClient's Http.

import type { CellStatus, Http, TemplateResponse } from "../src/api";

export const CTO = "http://example.org/cto/";
export const PATO = "http://example.org/pato/";

export const CELL_LABELS: Record<string, string> = {
  "mononuclear phagocyte": CTO + "CL_0000113",
  "epithelial cell": CTO + "CL_0000066",
  hepatocyte: CTO + "CL_0000182",
  erythrocyte: CTO + "CL_0000232",
  keratinocyte: CTO + "CL_0000312",
};

export const NUCLEATION_LABELS: Record<string, string> = {
  anucleate: PATO + "PATO_0001405",
  binucleate: PATO + "PATO_0001406",
  mononucleate: PATO + "PATO_0001407",
  multinucleate: PATO + "PATO_0001408",
};

const ROWS: string[][] = [
  ["Mononuclear Phagocyte", "mononucleate"],
  ["epithelial cell", "mononucleate"],
  ["hepatocyte", "binucleate"],
  ["erythrocyte", "anucleate"],
  ["Proximal tubule epithelial cell", "mononucleate"],
  ["keratinocyte", "mononucleate"],
];

function statusFor(column: string, text: string): CellStatus[] {
  const trimmed = text.trim();
  if (!trimmed) return [{ kind: "Empty" }];
  const labels = column === "Cell type" ? CELL_LABELS : NUCLEATION_LABELS;
  const iri = labels[trimmed.toLowerCase()];
  if (iri) return [{ kind: "Resolved", iri }];
  return [{ kind: "Unknown", text: trimmed }];
}

export function cellnucTemplate(rows: string[][] = ROWS): TemplateResponse {
  const header = ["Cell type", "Nucleation"];
  return {
    descriptor: {
      version: "1",
      prefixes: { cto: CTO, pato: PATO },
      ontologySources: [
        { id: "cto", origin: "cto.ofn", format: "FunctionalSyntax" },
        { id: "pato", origin: "pato.ofn", format: "FunctionalSyntax" },
      ],
      columns: [
        { name: "Cell type", range: { kind: "AllSubClasses", ontologyId: "cto", root: CTO + "CL_0000000" } },
        { name: "Nucleation", range: { kind: "AllSubClasses", ontologyId: "pato", root: PATO + "PATO_0001404" } },
      ],
    },
    table: { header, rows: rows.map((r) => [...r]) },
    statuses: rows.map((cells) => header.map((column, i) => statusFor(column, cells[i] ?? ""))),
    summary: {},
  };
}

function json(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

export interface StubOptions {
  template?: TemplateResponse;
  onExpand?: (body: unknown) => Response;
  failCells?: boolean;
  blessEverything?: boolean; // the service may call anything Resolved: the UI must obey
}

export interface StubService {
  http: Http;
  calls: { url: string; body?: unknown }[];
}

export function stubService(options: StubOptions = {}): StubService {
  const template = options.template ?? cellnucTemplate();
  const calls: { url: string; body?: unknown }[] = [];
  const http: Http = async (url, init) => {
    const body = init?.body ? JSON.parse(String(init.body)) : undefined;
    calls.push({ url, body });
    if (url.startsWith("/template")) return json(template);
    if (url.startsWith("/complete")) {
      const params = new URLSearchParams(url.split("?")[1]);
      const q = (params.get("q") ?? "").toLowerCase();
      const column = params.get("column") ?? "";
      const labels = column === "Cell type" ? CELL_LABELS : NUCLEATION_LABELS;
      const candidates = Object.entries(labels)
        .filter(([label]) => label.startsWith(q))
        .sort(([a], [b]) => a.localeCompare(b))
        .map(([label, iri]) => ({ iri, label }));
      return json({ candidates });
    }
    if (url.startsWith("/cells")) {
      if (options.failCells) return json({ error: "boom" }, 500);
      const { row, column, text } = body as { row: number; column: string; text: string };
      const statuses = options.blessEverything
        ? [{ kind: "Resolved", iri: "http://example.org/blessed" }]
        : statusFor(column, text);
      return json({ row, column, statuses });
    }
    if (url.startsWith("/expand")) {
      if (options.onExpand) return options.onExpand(body);
      return json({ error: "no expand handler" }, 500);
    }
    if (url.startsWith("/validate")) {
      return json({ summary: template.summary, statuses: template.statuses });
    }
    return json({ error: `unhandled ${url}` }, 404);
  };
  return { http, calls };
}

export { json };
