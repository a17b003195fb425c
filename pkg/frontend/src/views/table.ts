// Interactive results table: sortable headers, hyperlinked notice ids,
// pagination, and the download button for the current selection.

import type { ResultPage, SchemaField, SortSpec } from "../api.js";

export interface TableCallbacks {
  onSort: (sort: SortSpec) => void;
  onPage: (offset: number) => void;
  onDownload: () => void;
}

const PAGE_SIZE = 50;

export function renderResultsTable(
  container: HTMLElement,
  page: ResultPage,
  fields: SchemaField[],
  sort: SortSpec | undefined,
  callbacks: TableCallbacks,
): void {
  container.textContent = "";

  const summary = document.createElement("div");
  summary.className = "table-summary";
  const count = document.createElement("span");
  count.textContent =
    page.total_matches === 0 ? "0 matches" : `${page.total_matches.toLocaleString("en")} matches`;
  summary.append(count);

  const download = document.createElement("button");
  download.type = "button";
  download.className = "btn";
  download.textContent = "Download selection";
  download.addEventListener("click", callbacks.onDownload);
  summary.append(download);
  container.append(summary);

  if (page.total_matches === 0) return;

  // Highlighted fields are the curated, renamed columns; show those.
  const columns = fields.filter((f) => f.highlighted);
  const table = document.createElement("table");
  table.className = "results";
  const head = table.createTHead().insertRow();
  for (const field of columns) {
    const cell = document.createElement("th");
    const label = field.display_name;
    if (sort && (sort.field === field.display_name || sort.field === field.name)) {
      cell.textContent = `${label} ${sort.direction === "asc" ? "▲" : "▼"}`;
    } else {
      cell.textContent = label;
    }
    cell.tabIndex = 0;
    cell.addEventListener("click", () => {
      const direction =
        sort && sort.field === field.display_name && sort.direction === "asc" ? "desc" : "asc";
      callbacks.onSort({ field: field.display_name, direction });
    });
    head.append(cell);
  }

  const body = table.createTBody();
  for (const row of page.rows) {
    const tr = body.insertRow();
    for (const field of columns) {
      const td = tr.insertCell();
      const value = row[field.display_name];
      if (value === null || value === undefined) {
        td.textContent = "";
        td.className = "null-cell";
      } else if (field.display_name === "Award_Notice_Id_Link") {
        const link = document.createElement("a");
        link.href = String(value);
        link.target = "_blank";
        link.rel = "noopener";
        link.textContent = "notice";
        td.append(link);
      } else {
        td.textContent = typeof value === "number" ? value.toLocaleString("en") : value;
      }
    }
  }
  container.append(table);

  const pager = document.createElement("div");
  pager.className = "pager";
  const pages = Math.ceil(page.total_matches / PAGE_SIZE);
  const current = Math.floor(page.offset / PAGE_SIZE) + 1;

  const prev = document.createElement("button");
  prev.type = "button";
  prev.className = "btn";
  prev.textContent = "← prev";
  prev.disabled = page.offset === 0;
  prev.addEventListener("click", () => callbacks.onPage(Math.max(0, page.offset - PAGE_SIZE)));

  const next = document.createElement("button");
  next.type = "button";
  next.className = "btn";
  next.textContent = "next →";
  next.disabled = page.offset + PAGE_SIZE >= page.total_matches;
  next.addEventListener("click", () => callbacks.onPage(page.offset + PAGE_SIZE));

  const where = document.createElement("span");
  where.textContent = `page ${current} of ${pages}`;

  pager.append(prev, where, next);
  container.append(pager);
}

export { PAGE_SIZE };
