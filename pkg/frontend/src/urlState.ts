// The client keeps no state beyond the URL: the current tab and filter
// live in the fragment, so any exploration is a shareable link.

import type { SortSpec, WireNode } from "./api.js";

export interface UrlState {
  tab: "browse" | "sankey" | "cpv" | "quest";
  filter?: WireNode;
  sort?: SortSpec;
  offset?: number;
}

export function encodeState(state: UrlState): string {
  const params = new URLSearchParams();
  params.set("tab", state.tab);
  if (state.filter) params.set("filter", JSON.stringify(state.filter));
  if (state.sort) params.set("sort", `${state.sort.field}:${state.sort.direction}`);
  if (state.offset) params.set("offset", String(state.offset));
  return "#" + params.toString();
}

export function decodeState(hash: string): UrlState {
  const params = new URLSearchParams(hash.replace(/^#/, ""));
  const tab = params.get("tab");
  const state: UrlState = {
    tab: tab === "sankey" || tab === "cpv" || tab === "quest" ? tab : "browse",
  };
  const rawFilter = params.get("filter");
  if (rawFilter) {
    try {
      state.filter = JSON.parse(rawFilter) as WireNode;
    } catch {
      // Unreadable fragments fall back to a fresh view.
    }
  }
  const rawSort = params.get("sort");
  if (rawSort) {
    const colon = rawSort.lastIndexOf(":");
    const direction = rawSort.slice(colon + 1);
    if (colon > 0 && (direction === "asc" || direction === "desc")) {
      state.sort = { field: rawSort.slice(0, colon), direction };
    }
  }
  const rawOffset = params.get("offset");
  if (rawOffset && /^\d+$/.test(rawOffset)) state.offset = Number(rawOffset);
  return state;
}
