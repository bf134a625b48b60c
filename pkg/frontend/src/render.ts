/** DOM rendering helpers. `errorSnippet` is pure (and unit-tested); the
 * rest builds elements for the console page. */
import type { HistogramSpec, QueryResponse } from "./api.js";

/** Two-line excerpt pointing a caret at the reported error column. */
export function errorSnippet(text: string, line: number, column: number): string {
  const lines = text.split("\n");
  if (line < 1 || line > lines.length) {
    return "";
  }
  const source = lines[line - 1];
  const caretCol = Math.max(1, Math.min(column, source.length + 1));
  return source + "\n" + " ".repeat(caretCol - 1) + "^";
}

export function formatCell(value: string | number | null): string {
  if (value === null) return "";
  if (typeof value === "number" && !Number.isInteger(value)) {
    return parseFloat(value.toPrecision(12)).toString();
  }
  return String(value);
}

export function renderTable(response: QueryResponse): HTMLTableElement {
  const table = document.createElement("table");
  table.className = "results";
  const head = table.createTHead().insertRow();
  for (const column of response.columns) {
    const th = document.createElement("th");
    th.textContent = column;
    head.appendChild(th);
  }
  const body = table.createTBody();
  for (const row of response.rows) {
    const tr = body.insertRow();
    for (const cell of row) {
      tr.insertCell().textContent = formatCell(cell);
    }
  }
  return table;
}

export function renderHistogram(spec: HistogramSpec): HTMLElement {
  const container = document.createElement("div");
  container.className = "histogram";
  const title = document.createElement("h3");
  title.textContent = `${spec.group} (${spec.count} ratings)`;
  container.appendChild(title);
  const bars = document.createElement("div");
  bars.className = "bars";
  const peak = Math.max(...spec.densities, 1e-9);
  spec.densities.forEach((density, i) => {
    const bar = document.createElement("div");
    bar.className = "bar";
    bar.style.height = `${Math.round((density / peak) * 100)}%`;
    bar.title = `[${spec.edges[i].toFixed(2)}, ${spec.edges[i + 1].toFixed(2)}): ${density.toFixed(3)}`;
    bars.appendChild(bar);
  });
  container.appendChild(bars);
  return container;
}
