// History tree: every state the session has visited, as a tree (undo and
// revert fork branches).  Clicking a node reverts to it.

import { ProofStore, TreeNode, buildHistoryTree } from "../store.js";

export function renderHistoryTree(store: ProofStore): HTMLElement {
  const root = document.createElement("section");
  root.className = "history-tree";
  const title = document.createElement("header");
  title.textContent = "History";
  root.appendChild(title);

  const render = (node: TreeNode): HTMLElement => {
    const li = document.createElement("li");
    li.className = "history-node";
    const btn = document.createElement("button");
    btn.className =
      "history-label" + (node.entry.id === store.currentId ? " current" : "");
    btn.dataset.stateId = String(node.entry.id);
    btn.textContent = `${node.entry.id}: ${node.entry.label}`;
    btn.disabled = store.busy;
    btn.addEventListener("click", () => void store.revert(node.entry.id));
    li.appendChild(btn);
    if (node.children.length > 0) {
      const ul = document.createElement("ul");
      ul.className = "history-children";
      for (const child of node.children) {
        ul.appendChild(render(child));
      }
      li.appendChild(ul);
    }
    return li;
  };

  const top = document.createElement("ul");
  top.className = "history-roots";
  for (const node of buildHistoryTree(store.history)) {
    top.appendChild(render(node));
  }
  root.appendChild(top);
  return root;
}
