import { formatRank, TableRow } from "./model.js";

/**
 * Render consensus rows into a table element, best rank first.  Missing
 * source ranks show an em dash whose hover title carries the imputed
 * value; an empty row set renders a single empty-state message.
 */
export function renderTable(
  doc: Document,
  container: HTMLElement,
  rows: TableRow[],
  sources: string[],
): void {
  container.textContent = "";
  if (rows.length === 0) {
    const empty = doc.createElement("p");
    empty.className = "empty-state";
    empty.textContent = "No items to rank.";
    container.appendChild(empty);
    return;
  }
  const table = doc.createElement("table");
  table.className = "consensus";
  const head = doc.createElement("tr");
  for (const label of ["rank", "item", "raw score", ...sources]) {
    const th = doc.createElement("th");
    th.textContent = label;
    head.appendChild(th);
  }
  table.appendChild(head);
  for (const row of rows) {
    const tr = doc.createElement("tr");
    const rank = doc.createElement("td");
    rank.className = "rank";
    rank.textContent = formatRank(row.rank);
    const item = doc.createElement("td");
    item.className = "item";
    item.textContent = row.item;
    const score = doc.createElement("td");
    score.className = "score";
    score.textContent = row.rawScore.toPrecision(4);
    tr.append(rank, item, score);
    for (const cell of row.perSource) {
      const td = doc.createElement("td");
      td.className = "source";
      if (cell.known === null) {
        td.textContent = "—";
        td.title = `imputed value ${cell.extended.toFixed(4)}`;
      } else {
        td.textContent = String(cell.known);
      }
      tr.appendChild(td);
    }
    table.appendChild(tr);
  }
  container.appendChild(table);
}

export function renderBanner(container: HTMLElement, message: string | null): void {
  container.textContent = message ?? "";
  container.style.display = message ? "block" : "none";
}

/** Item names in displayed order, for tests and debugging. */
export function displayedOrder(container: HTMLElement): string[] {
  return Array.from(container.querySelectorAll("td.item")).map(
    (td) => td.textContent ?? "",
  );
}
