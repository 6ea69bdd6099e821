// Rule palette: the rules the server reports applicable to the selected
// goal, one button each; clicking issues the corresponding apply.

import { ProofStore } from "../store.js";

export function renderRulePalette(store: ProofStore): HTMLElement {
  const root = document.createElement("section");
  root.className = "rule-palette";
  const title = document.createElement("header");
  title.textContent =
    store.state && store.state.goals.length > 0
      ? `Applicable rules (goal ${store.selectedGoal})`
      : "Applicable rules";
  root.appendChild(title);

  if (!store.state || store.state.goals.length === 0) {
    return root;
  }
  if (store.rules.length === 0) {
    const hint = document.createElement("div");
    hint.className = "palette-hint";
    hint.textContent = "No single rule applies — try simp, taut or blast.";
    root.appendChild(hint);
    return root;
  }
  const list = document.createElement("div");
  list.className = "palette-buttons";
  for (const name of store.rules) {
    const btn = document.createElement("button");
    btn.className = "rule-button";
    btn.textContent = name;
    btn.disabled = store.busy;
    btn.addEventListener("click", () => void store.applyRule(name));
    list.appendChild(btn);
  }
  root.appendChild(list);
  return root;
}
