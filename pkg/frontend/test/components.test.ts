// DOM-level rendering checks (happy-dom environment).

import { describe, expect, it } from "vitest";

import { SessionClient } from "../src/client.js";
import { ProofStore } from "../src/store.js";
import { renderGoalPanel } from "../src/components/goalPanel.js";
import { renderRulePalette } from "../src/components/rulePalette.js";
import { renderHistoryTree } from "../src/components/historyTree.js";
import { renderCountermodel } from "../src/components/tacticInput.js";
import { FakeTransport, stateWith } from "./fake.js";

function bareStore(): ProofStore {
  return new ProofStore(new SessionClient(new FakeTransport()));
}

describe("goal panel", () => {
  it("renders one card per subgoal with assumptions and target", () => {
    const store = bareStore();
    store.state = stateWith([
      { index: 1, target: "p", assumptions: ["p ∧ q"] },
      { index: 2, target: "q", assumptions: ["p ∧ q"] },
    ]);
    const panel = renderGoalPanel(store);
    const cards = panel.querySelectorAll(".goal-card");
    expect(cards).toHaveLength(2);
    expect(cards[0]!.querySelector(".goal-target")!.textContent).toBe("p");
    expect(cards[0]!.querySelectorAll(".assumption")[0]!.textContent).toBe("p ∧ q");
  });

  it("renders the ready-to-qed message when no goals remain", () => {
    const store = bareStore();
    store.state = stateWith([]);
    const panel = renderGoalPanel(store);
    expect(panel.textContent).toContain("No subgoals — ready to qed");
  });

  it("shows errors inline without clearing the goals", () => {
    const store = bareStore();
    store.state = stateWith([{ index: 1, target: "p → p" }]);
    store.lastError = "ProofError: tactic failed: rule conjI";
    const panel = renderGoalPanel(store);
    expect(panel.querySelector(".error-banner")!.textContent).toContain("tactic failed");
    expect(panel.querySelectorAll(".goal-card")).toHaveLength(1);
  });

  it("lists parameters and placeholder assignments", () => {
    const store = bareStore();
    store.state = stateWith(
      [{ index: 1, target: "psi ?w", params: ["x", "y"] }],
      { "?w": "f one" },
    );
    const panel = renderGoalPanel(store);
    expect(panel.querySelector(".goal-params")!.textContent).toBe("fixes x y");
    expect(panel.querySelector(".placeholder")!.textContent).toBe("?w := f one");
  });
});

describe("rule palette", () => {
  it("renders a button per applicable rule and applies on click", async () => {
    const t = new FakeTransport();
    const applied: string[] = [];
    t.responders.set("apply", (req) => {
      applied.push(String(req.args.tactic));
      return stateWith([]);
    });
    t.responders.set("history", () => ({ states: [], current: null }));
    t.responders.set("rules", () => ({ rules: [] }));
    const store = new ProofStore(new SessionClient(t));
    store.state = stateWith([{ index: 1, target: "p ∧ q" }]);
    store.rules = ["conjI", "classical"];
    const palette = renderRulePalette(store);
    const buttons = palette.querySelectorAll("button.rule-button");
    expect([...buttons].map((b) => b.textContent)).toEqual(["conjI", "classical"]);
    (buttons[0] as HTMLButtonElement).click();
    await new Promise((r) => setTimeout(r, 0));
    expect(applied).toEqual(["rule conjI"]);
  });

  it("hints at automation when nothing applies", () => {
    const store = bareStore();
    store.state = stateWith([{ index: 1, target: "P c" }]);
    store.rules = [];
    const palette = renderRulePalette(store);
    expect(palette.querySelector(".palette-hint")!.textContent).toContain("simp, taut or blast");
  });

  it("surfaces a server error from a failing rule click", async () => {
    const t = new FakeTransport();
    t.responders.set("apply", () => {
      throw { kind: "ProofError", msg: "tactic failed: rule conjI" };
    });
    const store = new ProofStore(new SessionClient(t));
    store.state = stateWith([{ index: 1, target: "p" }]);
    store.rules = ["conjI"];
    const palette = renderRulePalette(store);
    (palette.querySelector("button.rule-button") as HTMLButtonElement).click();
    await new Promise((r) => setTimeout(r, 0));
    expect(store.lastError).toContain("tactic failed");
    expect(store.state!.goals).toHaveLength(1); // display intact
  });
});

describe("history tree", () => {
  it("renders a linear proof as a path of nodes", () => {
    const store = bareStore();
    store.history = [
      { id: 1, parent: null, label: "goal" },
      { id: 2, parent: 1, label: "rule impI" },
      { id: 3, parent: 2, label: "assumption" },
      { id: 4, parent: 3, label: "qed" },
    ];
    store.currentId = 4;
    const tree = renderHistoryTree(store);
    expect(tree.querySelectorAll(".history-node")).toHaveLength(4);
    expect(tree.querySelectorAll(".history-children")).toHaveLength(3);
    expect(tree.querySelector(".history-label.current")!.textContent).toContain("4");
  });

  it("renders a branch after revert plus a new apply", () => {
    const store = bareStore();
    store.history = [
      { id: 1, parent: null, label: "goal" },
      { id: 2, parent: 1, label: "rule conjI" },
      { id: 3, parent: 1, label: "rule impI" },
    ];
    const tree = renderHistoryTree(store);
    const rootNode = tree.querySelector(".history-node")!;
    expect(rootNode.querySelectorAll(":scope > ul > .history-node")).toHaveLength(2);
  });

  it("clicking a node issues revert", async () => {
    const t = new FakeTransport();
    const reverted: number[] = [];
    t.responders.set("revert", (req) => {
      reverted.push(Number(req.args.state));
      return stateWith([{ index: 1, target: "p → p" }]);
    });
    t.responders.set("history", () => ({ states: [], current: null }));
    t.responders.set("rules", () => ({ rules: [] }));
    const store = new ProofStore(new SessionClient(t));
    store.history = [{ id: 1, parent: null, label: "goal" }];
    const tree = renderHistoryTree(store);
    (tree.querySelector(".history-label") as HTMLButtonElement).click();
    await new Promise((r) => setTimeout(r, 0));
    expect(reverted).toEqual([1]);
    expect(store.state!.goals[0]!.target).toBe("p → p");
  });
});

describe("countermodel table", () => {
  it("renders domains, tables and variable values", () => {
    const box = renderCountermodel({
      domains: { ind: 2 },
      constants: { f: { "0": 0, "1": 0 } },
      variables: { x: 1 },
    });
    expect(box.textContent).toContain("ind = {0..1}");
    const rows = box.querySelectorAll("tr");
    expect(rows).toHaveLength(3);
    expect(rows[2]!.textContent).toContain("x");
  });
});
