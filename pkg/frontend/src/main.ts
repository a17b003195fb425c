// Application shell: four tabs over one URL-encoded exploration state.

import { ApiError, Client, SchemaField, SortSpec, WireNode } from "./api.js";
import {
  GroupState,
  SchemaIndex,
  defaultCondition,
  emptyBuilder,
  fromWire,
  toWire,
} from "./filterModel.js";
import { decodeState, encodeState, UrlState } from "./urlState.js";
import { renderGroup } from "./views/builder.js";
import { mountCpvTab } from "./views/cpv.js";
import { mountQuestPage } from "./views/quest.js";
import { renderSankey } from "./views/sankey.js";
import { PAGE_SIZE, renderResultsTable } from "./views/table.js";

const TABS: [UrlState["tab"], string][] = [
  ["browse", "Browse"],
  ["sankey", "Flows"],
  ["cpv", "CPV codes"],
  ["quest", "Quest"],
];

class App {
  private client = new Client();
  private index!: SchemaIndex;
  private fields: SchemaField[] = [];
  private builder: GroupState = emptyBuilder();
  private sort: SortSpec | undefined;
  private offset = 0;
  private tab: UrlState["tab"] = "browse";
  private inflight: AbortController | null = null;
  private suppressHash = false;

  constructor(private root: HTMLElement) {}

  async start(): Promise<void> {
    this.fields = await this.client.schema();
    this.index = new SchemaIndex(this.fields);
    this.applyUrl(decodeState(location.hash));
    window.addEventListener("hashchange", () => {
      if (this.suppressHash) return;
      this.applyUrl(decodeState(location.hash));
    });
    this.render();
  }

  private applyUrl(state: UrlState): void {
    this.tab = state.tab;
    this.sort = state.sort;
    this.offset = state.offset ?? 0;
    if (state.filter) {
      try {
        const node = fromWire(state.filter, this.index);
        this.builder =
          node.kind === "group"
            ? node
            : { kind: "group", combinator: "and", children: [node] };
      } catch {
        this.builder = emptyBuilder();
      }
    }
    this.render();
  }

  private currentFilter(): WireNode | null {
    if (this.builder.children.length === 0) return null;
    try {
      return toWire(this.builder, this.index);
    } catch {
      return null;
    }
  }

  private pushUrl(): void {
    const state: UrlState = { tab: this.tab };
    const filter = this.currentFilter();
    if (filter) state.filter = filter;
    if (this.sort) state.sort = this.sort;
    if (this.offset) state.offset = this.offset;
    this.suppressHash = true;
    location.hash = encodeState(state);
    queueMicrotask(() => (this.suppressHash = false));
  }

  private nextSignal(): AbortSignal {
    this.inflight?.abort();
    this.inflight = new AbortController();
    return this.inflight.signal;
  }

  private render(): void {
    this.root.textContent = "";
    const nav = document.createElement("nav");
    for (const [tab, label] of TABS) {
      const link = document.createElement("button");
      link.type = "button";
      link.className = "tab" + (tab === this.tab ? " active" : "");
      link.textContent = label;
      link.addEventListener("click", () => {
        this.tab = tab;
        this.pushUrl();
        this.render();
      });
      nav.append(link);
    }
    this.root.append(nav);

    const page = document.createElement("main");
    this.root.append(page);
    if (this.tab === "browse") this.renderBrowse(page);
    else if (this.tab === "sankey") this.renderFlows(page);
    else if (this.tab === "cpv") mountCpvTab(page, this.client);
    else this.renderQuest(page);
  }

  private errorBox(parent: HTMLElement): HTMLElement {
    const box = document.createElement("div");
    box.className = "error";
    box.hidden = true;
    parent.append(box);
    return box;
  }

  private showError(box: HTMLElement, error: unknown): void {
    if ((error as Error).name === "AbortError") return;
    box.hidden = false;
    box.textContent =
      error instanceof ApiError
        ? error.issues.map((i) => (i.field ? `${i.field}: ${i.message}` : i.message)).join("\n")
        : String(error);
  }

  private renderBrowse(page: HTMLElement): void {
    const builderBox = document.createElement("section");
    builderBox.className = "builder-box";
    page.append(builderBox);

    const results = document.createElement("section");
    results.className = "results-box";
    const errors = this.errorBox(page);
    page.append(results);

    const redrawBuilder = () => {
      builderBox.textContent = "";
      builderBox.append(
        renderGroup(this.builder, this.index, { onChange: () => this.pushUrl() }),
      );
      const apply = document.createElement("button");
      apply.type = "button";
      apply.className = "btn primary";
      apply.textContent = "Apply filter";
      apply.addEventListener("click", () => {
        this.offset = 0;
        void run();
      });
      builderBox.append(apply);
    };

    const run = async () => {
      const filter = this.currentFilter();
      errors.hidden = true;
      if (!filter) {
        results.textContent = "";
        const hint = document.createElement("p");
        hint.className = "hint";
        hint.textContent = "Add a condition and apply the filter to list notices.";
        results.append(hint);
        return;
      }
      this.pushUrl();
      try {
        const data = await this.client.query(
          filter,
          { sort: this.sort, offset: this.offset, limit: PAGE_SIZE },
          this.nextSignal(),
        );
        renderResultsTable(results, data, this.fields, this.sort, {
          onSort: (sort) => {
            this.sort = sort;
            this.offset = 0;
            void run();
          },
          onPage: (offset) => {
            this.offset = offset;
            void run();
          },
          onDownload: () => void this.download(filter, errors),
        });
      } catch (error) {
        this.showError(errors, error);
      }
    };

    redrawBuilder();
    if (this.builder.children.length === 0) {
      this.builder.children.push(defaultCondition(this.index));
      redrawBuilder();
    } else {
      void run();
    }
  }

  private async download(filter: WireNode, errors: HTMLElement): Promise<void> {
    try {
      const blob = await this.client.exportCsv(filter, this.sort);
      const url = URL.createObjectURL(blob);
      const link = document.createElement("a");
      link.href = url;
      link.download = "selection.csv";
      link.click();
      URL.revokeObjectURL(url);
    } catch (error) {
      this.showError(errors, error);
    }
  }

  private renderFlows(page: HTMLElement): void {
    const errors = this.errorBox(page);
    const box = document.createElement("section");
    page.append(box);
    const filter = this.currentFilter();
    if (!filter) {
      box.textContent = "Build a filter on the Browse tab first; flows show its selection.";
      return;
    }
    box.textContent = "Loading flows…";
    this.client
      .sankey(filter, undefined, this.nextSignal())
      .then((graph) => renderSankey(box, graph))
      .catch((error) => {
        box.textContent = "";
        this.showError(errors, error);
      });
  }

  private renderQuest(page: HTMLElement): void {
    mountQuestPage(page, this.client, {
      onPlay: () => {
        this.builder = emptyBuilder();
        this.sort = undefined;
        this.offset = 0;
        this.tab = "browse";
        this.pushUrl();
        this.render();
      },
      onSolution: (filter) => {
        const node = fromWire(filter, this.index);
        this.builder =
          node.kind === "group"
            ? node
            : { kind: "group", combinator: "and", children: [node] };
        this.sort = undefined;
        this.offset = 0;
        this.tab = "browse";
        this.pushUrl();
        this.render();
      },
    });
  }
}

const root = document.getElementById("app");
if (root) {
  new App(root).start().catch((error) => {
    root.textContent = `Failed to load the field registry: ${error}`;
  });
}
