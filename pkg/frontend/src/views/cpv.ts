// Vocabulary tab: search box, digit-limit selector, sortable code table.

import type { Client, CpvEntry } from "../api.js";

interface CpvState {
  query: string;
  digits?: number;
  sortBy: "code" | "description";
  direction: 1 | -1;
  entries: CpvEntry[];
  total: number;
}

export function mountCpvTab(container: HTMLElement, client: Client): void {
  container.textContent = "";
  const state: CpvState = {
    query: "",
    sortBy: "code",
    direction: 1,
    entries: [],
    total: 0,
  };
  let inflight: AbortController | null = null;

  const controls = document.createElement("div");
  controls.className = "cpv-controls";

  const search = document.createElement("input");
  search.placeholder = "Search descriptions or code prefixes";
  search.addEventListener("input", () => {
    state.query = search.value;
    void refresh();
  });

  const digits = document.createElement("select");
  const anyOption = document.createElement("option");
  anyOption.value = "";
  anyOption.textContent = "any depth";
  digits.append(anyOption);
  for (let d = 2; d <= 8; d++) {
    const option = document.createElement("option");
    option.value = String(d);
    option.textContent = `${d} digits`;
    digits.append(option);
  }
  digits.addEventListener("change", () => {
    state.digits = digits.value ? Number(digits.value) : undefined;
    void refresh();
  });

  controls.append(search, digits);

  const status = document.createElement("p");
  status.className = "cpv-status";
  const errorBox = document.createElement("p");
  errorBox.className = "error inline-error";
  errorBox.hidden = true;
  const tableBox = document.createElement("div");
  container.append(controls, status, errorBox, tableBox);

  function renderTable(): void {
    tableBox.textContent = "";
    const table = document.createElement("table");
    table.className = "results";
    const head = table.createTHead().insertRow();
    for (const key of ["code", "description"] as const) {
      const th = document.createElement("th");
      th.textContent =
        (key === "code" ? "Code" : "Description") +
        (state.sortBy === key ? (state.direction === 1 ? " ▲" : " ▼") : "");
      th.addEventListener("click", () => {
        state.direction = state.sortBy === key && state.direction === 1 ? -1 : 1;
        state.sortBy = key;
        renderTable();
      });
      head.append(th);
    }
    const sorted = [...state.entries].sort((a, b) => {
      const va = a[state.sortBy];
      const vb = b[state.sortBy];
      return va < vb ? -state.direction : va > vb ? state.direction : 0;
    });
    const body = table.createTBody();
    for (const entry of sorted) {
      const row = body.insertRow();
      row.insertCell().textContent = entry.code;
      row.insertCell().textContent = entry.description;
    }
    tableBox.append(table);
  }

  async function refresh(): Promise<void> {
    inflight?.abort();
    inflight = new AbortController();
    errorBox.hidden = true;
    try {
      const page = await client.cpv(
        { query: state.query, digits: state.digits, limit: 500 },
        inflight.signal,
      );
      state.entries = page.entries;
      state.total = page.total;
      status.textContent =
        page.total === page.entries.length
          ? `${page.total} codes`
          : `showing ${page.entries.length} of ${page.total} codes`;
      renderTable();
    } catch (error) {
      if ((error as Error).name === "AbortError") return;
      errorBox.textContent = String(error);
      errorBox.hidden = false;
    }
  }

  void refresh();
}
