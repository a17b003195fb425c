// Quest page: a challenge plus three buttons. "Let's play" opens a blank
// filter builder, "Show me the solution" opens the builder prefilled with
// the answering conditions, "Not fun enough" re-rolls with a new seed.

import type { Client, QuestResponse, WireNode } from "../api.js";

export interface QuestCallbacks {
  onPlay: () => void;
  onSolution: (filter: WireNode) => void;
}

export function mountQuestPage(
  container: HTMLElement,
  client: Client,
  callbacks: QuestCallbacks,
): void {
  container.textContent = "";
  let inflight: AbortController | null = null;

  const heading = document.createElement("p");
  heading.className = "quest-lead";
  heading.textContent = "Public spending is fun! Who wants to be a supplier?";

  const title = document.createElement("h2");
  title.className = "quest-title";

  const errorBox = document.createElement("p");
  errorBox.className = "error inline-error";
  errorBox.hidden = true;

  const buttons = document.createElement("div");
  buttons.className = "quest-buttons";

  container.append(heading, title, errorBox, buttons);

  let current: QuestResponse | null = null;

  function button(label: string, onClick: () => void): HTMLButtonElement {
    const node = document.createElement("button");
    node.type = "button";
    node.className = "btn quest-btn";
    node.textContent = label;
    node.addEventListener("click", onClick);
    return node;
  }

  async function roll(): Promise<void> {
    inflight?.abort();
    inflight = new AbortController();
    errorBox.hidden = true;
    title.textContent = "…";
    try {
      const seed = Math.floor(Math.random() * 2 ** 31);
      current = await client.quest(seed, undefined, inflight.signal);
      title.textContent = `Find the biggest suppliers of: ${current.quest.title}`;
    } catch (error) {
      if ((error as Error).name === "AbortError") return;
      current = null;
      title.textContent = "";
      errorBox.textContent = String(error);
      errorBox.hidden = false;
    }
  }

  buttons.append(
    button("Let's play", () => callbacks.onPlay()),
    button("Show me the solution", () => {
      if (current) callbacks.onSolution(current.filter);
    }),
    button("Not fun enough", () => void roll()),
  );

  void roll();
}
