// Flow diagram: contracting authorities on the left, contractors on the
// right, ribbon thickness proportional to the summed contract values.
// Plain SVG, no chart library.

import type { SankeyData } from "../api.js";

const WIDTH = 960;
const NODE_WIDTH = 14;
const GAP = 6;
const MIN_BODY = 280;

const SVG_NS = "http://www.w3.org/2000/svg";

function svgEl<K extends keyof SVGElementTagNameMap>(tag: K): SVGElementTagNameMap[K] {
  return document.createElementNS(SVG_NS, tag);
}

function euros(value: number): string {
  return `€${value.toLocaleString("en")}`;
}

interface Placed {
  y: number;
  height: number;
  used: number; // running offset for ribbon attachment
}

function placeNodes(totals: number[], scale: number, topPad: number): Placed[] {
  let y = topPad;
  return totals.map((total) => {
    const height = Math.max(total * scale, 1);
    const placed = { y, height, used: 0 };
    y += height + GAP;
    return placed;
  });
}

export function renderSankey(container: HTMLElement, graph: SankeyData): void {
  container.textContent = "";

  const stats = document.createElement("div");
  stats.className = "sankey-stats";
  const items: [string, number][] = [
    ["contracting authorities", graph.stats.n_authorities],
    ["contractors", graph.stats.n_contractors],
    ["contracts", graph.stats.n_contracts],
    ["total value (EUR)", graph.stats.total_value_euros],
  ];
  for (const [label, value] of items) {
    const item = document.createElement("div");
    item.className = "stat";
    const strong = document.createElement("strong");
    strong.textContent = value.toLocaleString("en");
    item.append(strong, document.createTextNode(" " + label));
    stats.append(item);
  }
  container.append(stats);

  if (graph.truncated) {
    const note = document.createElement("p");
    note.className = "truncation-note";
    note.textContent =
      "Showing only the largest flows; statistics above still cover the whole selection.";
    container.append(note);
  }

  if (graph.links.length === 0) {
    const empty = document.createElement("p");
    empty.className = "empty-note";
    empty.textContent = "No flows to draw.";
    container.append(empty);
    return;
  }

  const leftTotals = graph.authorities.map((n) => n.total);
  const rightTotals = graph.contractors.map((n) => n.total);
  const sum = (xs: number[]) => xs.reduce((a, b) => a + b, 0);
  const tallestSide = Math.max(sum(leftTotals), sum(rightTotals), 1);
  const bodyHeight = Math.max(
    MIN_BODY,
    Math.min(1600, 24 * Math.max(leftTotals.length, rightTotals.length)),
  );
  const scale = bodyHeight / tallestSide;
  const height =
    bodyHeight + GAP * Math.max(leftTotals.length, rightTotals.length) + 20;

  const left = placeNodes(leftTotals, scale, 10);
  const right = placeNodes(rightTotals, scale, 10);

  const svg = svgEl("svg");
  svg.setAttribute("viewBox", `0 0 ${WIDTH} ${height}`);
  svg.setAttribute("class", "sankey");

  // Ribbons first so node rectangles sit on top of their ends.
  const ordered = [...graph.links].sort(
    (a, b) => a.authority - b.authority || b.value - a.value,
  );
  const x0 = 180 + NODE_WIDTH;
  const x1 = WIDTH - 180 - NODE_WIDTH;
  for (const link of ordered) {
    const source = left[link.authority];
    const target = right[link.contractor];
    if (!source || !target) continue;
    const thickness = Math.max(link.value * scale, 0.75);
    const sy = source.y + source.used;
    const ty = target.y + target.used;
    source.used += link.value * scale;
    target.used += link.value * scale;

    const mid = (x0 + x1) / 2;
    const path = svgEl("path");
    path.setAttribute(
      "d",
      `M ${x0} ${sy} C ${mid} ${sy}, ${mid} ${ty}, ${x1} ${ty} ` +
        `L ${x1} ${ty + thickness} C ${mid} ${ty + thickness}, ${mid} ${sy + thickness}, ` +
        `${x0} ${sy + thickness} Z`,
    );
    path.setAttribute("class", "flow");

    const authority = graph.authorities[link.authority];
    const contractor = graph.contractors[link.contractor];
    const title = svgEl("title");
    title.textContent =
      `${authority?.name} → ${contractor?.name}: ${euros(link.value)} ` +
      `(${link.contract_count} contract${link.contract_count === 1 ? "" : "s"})`;
    path.append(title);

    const notice = link.notice_links[0];
    if (notice) {
      path.classList.add("clickable");
      path.addEventListener("click", () => window.open(notice, "_blank", "noopener"));
    }
    svg.append(path);
  }

  const drawNodes = (
    nodes: { name: string; total: number }[],
    placed: Placed[],
    x: number,
    anchor: "start" | "end",
  ) => {
    nodes.forEach((node, i) => {
      const slot = placed[i];
      if (!slot) return;
      const rect = svgEl("rect");
      rect.setAttribute("x", String(x));
      rect.setAttribute("y", String(slot.y));
      rect.setAttribute("width", String(NODE_WIDTH));
      rect.setAttribute("height", String(slot.height));
      rect.setAttribute("class", "node");
      const title = svgEl("title");
      title.textContent = `${node.name}: ${euros(node.total)}`;
      rect.append(title);
      svg.append(rect);

      const text = svgEl("text");
      text.setAttribute("x", String(anchor === "end" ? x - 6 : x + NODE_WIDTH + 6));
      text.setAttribute("y", String(slot.y + slot.height / 2 + 4));
      text.setAttribute("text-anchor", anchor);
      text.setAttribute("class", "node-label");
      text.textContent =
        node.name.length > 28 ? node.name.slice(0, 27) + "…" : node.name;
      svg.append(text);
    });
  };
  drawNodes(graph.authorities, left, 180, "end");
  drawNodes(graph.contractors, right, WIDTH - 180 - NODE_WIDTH, "start");

  container.append(svg);
}
