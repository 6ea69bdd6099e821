// Free-text tactic entry with an input history (arrow keys), plus goal /
// qed / undo / countermodel controls.  Countermodels render as a table.

import { ProofStore } from "../store.js";
import { Countermodel } from "../protocol.js";

export function renderCountermodel(model: Countermodel): HTMLElement {
  const box = document.createElement("div");
  box.className = "countermodel";
  const caption = document.createElement("div");
  caption.className = "cex-domains";
  caption.textContent =
    "countermodel over " +
    Object.entries(model.domains)
      .map(([t, n]) => `${t} = {0..${n - 1}}`)
      .join(", ");
  box.appendChild(caption);
  const table = document.createElement("table");
  table.className = "cex-table";
  const add = (name: string, arg: string, value: unknown) => {
    const tr = document.createElement("tr");
    for (const cell of [name, arg, String(value)]) {
      const td = document.createElement("td");
      td.textContent = cell;
      tr.appendChild(td);
    }
    table.appendChild(tr);
  };
  for (const [name, tbl] of Object.entries(model.constants)) {
    for (const [args, value] of Object.entries(tbl)) {
      add(name, args, value);
    }
  }
  for (const [name, value] of Object.entries(model.variables)) {
    add(name, "", value);
  }
  box.appendChild(table);
  return box;
}

export function renderTacticInput(store: ProofStore, inputHistory: string[]): HTMLElement {
  const root = document.createElement("section");
  root.className = "tactic-input";
  let cursor = inputHistory.length;

  const input = document.createElement("input");
  input.type = "text";
  input.placeholder = "tactic, e.g.  rule conjI  |  simp  |  blast 8";
  input.disabled = store.busy;

  const submit = async () => {
    const text = input.value.trim();
    if (!text) return;
    inputHistory.push(text);
    cursor = inputHistory.length;
    input.value = "";
    await store.applyTactic(text);
  };

  input.addEventListener("keydown", (ev) => {
    if (ev.key === "Enter") {
      void submit();
    } else if (ev.key === "ArrowUp") {
      if (cursor > 0) {
        cursor -= 1;
        input.value = inputHistory[cursor] ?? "";
      }
      ev.preventDefault();
    } else if (ev.key === "ArrowDown") {
      if (cursor < inputHistory.length) {
        cursor += 1;
        input.value = inputHistory[cursor] ?? "";
      }
      ev.preventDefault();
    }
  });

  const applyBtn = document.createElement("button");
  applyBtn.textContent = "apply";
  applyBtn.disabled = store.busy;
  applyBtn.addEventListener("click", () => void submit());

  const undoBtn = document.createElement("button");
  undoBtn.textContent = "undo";
  undoBtn.disabled = store.busy;
  undoBtn.addEventListener("click", () => void store.undo());

  const qedBtn = document.createElement("button");
  qedBtn.textContent = "qed";
  qedBtn.disabled = store.busy || !store.state || store.state.goals.length > 0;
  qedBtn.addEventListener("click", () => {
    const name = window.prompt("store theorem as (blank for none):") ?? undefined;
    void store.qed(name || undefined);
  });

  const cexBtn = document.createElement("button");
  cexBtn.textContent = "cex";
  cexBtn.disabled = store.busy;
  cexBtn.addEventListener("click", () => void store.findCounterexample(3));

  root.append(input, applyBtn, undoBtn, qedBtn, cexBtn);

  if (store.busy) {
    const cancelBtn = document.createElement("button");
    cancelBtn.className = "cancel-button";
    cancelBtn.textContent = "cancel";
    cancelBtn.addEventListener("click", () => {
      const running = store.client.busyRequest;
      if (running !== null) void store.client.cancel(running);
    });
    root.appendChild(cancelBtn);
  }

  if (store.countermodel) {
    root.appendChild(renderCountermodel(store.countermodel));
  }
  return root;
}
