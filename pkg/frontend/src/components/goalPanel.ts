// Goal panel: one card per open subgoal (parameters, assumptions, target),
// the current placeholder assignments, and any inline error.  Every string
// shown here came verbatim from the server.

import { ProofStore } from "../store.js";

function el(tag: string, cls: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  node.className = cls;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderGoalPanel(store: ProofStore): HTMLElement {
  const root = el("section", "goal-panel");

  if (store.lastError) {
    root.appendChild(el("div", "error-banner", store.lastError));
  }

  const state = store.state;
  if (!state) {
    root.appendChild(el("div", "empty-hint", "No proof in progress — state a goal below."));
    return root;
  }

  if (state.goals.length === 0) {
    const done = el("div", "no-subgoals", "No subgoals — ready to qed");
    root.appendChild(done);
    if (store.lastTheorem) {
      root.appendChild(el("div", "theorem", `⊢ ${store.lastTheorem}`));
    }
    return root;
  }

  for (const g of state.goals) {
    const card = el("article", "goal-card" + (g.index === store.selectedGoal ? " selected" : ""));
    card.dataset.goal = String(g.index);
    card.appendChild(el("header", "goal-index", `Goal ${g.index}`));
    if (g.params.length > 0) {
      card.appendChild(el("div", "goal-params", `fixes ${g.params.join(" ")}`));
    }
    if (g.assumptions.length > 0) {
      const list = el("ul", "goal-assumptions");
      for (const a of g.assumptions) {
        list.appendChild(el("li", "assumption", a));
      }
      card.appendChild(list);
    }
    card.appendChild(el("div", "goal-target", g.target));
    card.addEventListener("click", () => void store.selectGoal(g.index));
    root.appendChild(card);
  }

  const ph = Object.entries(state.placeholders);
  if (ph.length > 0) {
    const box = el("div", "placeholders");
    box.appendChild(el("span", "placeholders-title", "placeholders"));
    const list = el("ul", "placeholder-list");
    for (const [k, v] of ph) {
      list.appendChild(el("li", "placeholder", `${k} := ${v}`));
    }
    box.appendChild(list);
    root.appendChild(box);
  }
  return root;
}
