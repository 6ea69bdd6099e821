// Browser entry point: wire the transport, store and components together.
// Rendering is a plain re-draw on every store change; the store itself is
// nothing but a cache of server responses plus the history tree.

import { SessionClient } from "./client.js";
import { HttpTransport } from "./transport.js";
import { ProofStore } from "./store.js";
import { renderGoalPanel } from "./components/goalPanel.js";
import { renderRulePalette } from "./components/rulePalette.js";
import { renderHistoryTree } from "./components/historyTree.js";
import { renderTacticInput } from "./components/tacticInput.js";

export function mount(root: HTMLElement, store: ProofStore): void {
  const inputHistory: string[] = [];

  const header = document.createElement("header");
  header.className = "topbar";
  const theory = document.createElement("input");
  theory.placeholder = "theory to load (e.g. Nat)";
  const loadBtn = document.createElement("button");
  loadBtn.textContent = "load";
  loadBtn.addEventListener("click", () => void store.loadTheory(theory.value.trim()));
  const goalInput = document.createElement("input");
  goalInput.className = "goal-entry";
  goalInput.placeholder = 'goal, e.g.  p & q --> q & p';
  const goalBtn = document.createElement("button");
  goalBtn.textContent = "goal";
  const startGoal = () => void store.setGoal(goalInput.value.trim());
  goalBtn.addEventListener("click", startGoal);
  goalInput.addEventListener("keydown", (ev) => {
    if (ev.key === "Enter") startGoal();
  });
  header.append(theory, loadBtn, goalInput, goalBtn);

  const main = document.createElement("main");
  const side = document.createElement("aside");

  const redraw = () => {
    main.replaceChildren(renderGoalPanel(store), renderTacticInput(store, inputHistory));
    side.replaceChildren(renderRulePalette(store), renderHistoryTree(store));
  };
  store.subscribe(redraw);
  root.replaceChildren(header, main, side);
  redraw();
}

export function start(): ProofStore {
  const client = new SessionClient(new HttpTransport("/rpc"));
  const store = new ProofStore(client);
  const root = document.getElementById("app");
  if (root) mount(root, store);
  // a reload reproduces the display from the server's own record
  void store.refreshAll();
  return store;
}

declare global {
  interface Window {
    lcfkit?: ProofStore;
  }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  window.lcfkit = start();
}
