// End-to-end: the UI layers drive the real prover over its stdio protocol;
// the placeholder scenario run through the goal panel and rule palette must
// produce the same stored theorem as the scripted session, and reverting
// through the history tree must restore the initial rendered goal.

import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { SessionClient } from "../src/client.js";
import { ProofStore } from "../src/store.js";
import { renderGoalPanel } from "../src/components/goalPanel.js";
import { renderHistoryTree } from "../src/components/historyTree.js";
import { renderRulePalette } from "../src/components/rulePalette.js";
import { StdioTransport } from "./stdio.js";

const SCENARIO = `theory Scenario imports Base
const phi :: ind => bool
const psi :: ind => bool
const f :: ind => ind
const one :: ind
`;

const GOAL = "phi (f one) --> psi (f one) --> (EX x. phi x & psi x)";
// what the REPL script `goal ... / apply ... / qed witness_example` stores,
// as pinned by the backend's own golden acceptance test
const EXPECTED_THEOREM = "phi (f one) → psi (f one) → ∃x. phi x ∧ psi x";

let transport: StdioTransport;
let client: SessionClient;
let store: ProofStore;

beforeAll(() => {
  const dir = mkdtempSync(join(tmpdir(), "lcfkit-ui-"));
  writeFileSync(join(dir, "Scenario.lthy"), SCENARIO);
  transport = new StdioTransport(["--path", dir]);
  client = new SessionClient(transport);
  store = new ProofStore(client);
});

afterAll(() => {
  transport.close();
});

describe("placeholder scenario through the UI", () => {
  it("replays the scripted proof and stores the same theorem", async () => {
    await store.loadTheory("Scenario");
    expect(store.lastError).toBeNull();

    await store.setGoal(GOAL);
    expect(store.state!.goals).toHaveLength(1);
    const initialRendering = renderGoalPanel(store).innerHTML;

    // two intro steps typed into the tactic input
    await store.applyTactic("rule impI");
    await store.applyTactic("rule impI");

    // the palette lists exI for the existential target; click it
    expect(store.rules).toContain("exI");
    await store.applyRule("exI");

    // then conjI from the palette
    expect(store.rules).toContain("conjI");
    await store.applyRule("conjI");
    expect(store.state!.goals).toHaveLength(2);
    const targets = store.state!.goals.map((g) => g.target);
    expect(targets[0]).toMatch(/^phi \?/);
    expect(targets[1]).toMatch(/^psi \?/);

    // closing the phi goal by assumption instantiates the shared
    // placeholder: the remaining subgoal renders as the psi instance
    await store.applyTactic("assumption", 1);
    expect(store.state!.goals.map((g) => g.target)).toEqual(["psi (f one)"]);
    const panel = renderGoalPanel(store);
    expect(panel.querySelector(".goal-target")!.textContent).toBe("psi (f one)");
    expect(panel.querySelector(".placeholder")!.textContent).toMatch(/\?w.* := f one/);

    await store.applyTactic("assumption", 1);
    expect(store.state!.goals).toHaveLength(0);
    expect(renderGoalPanel(store).textContent).toContain("No subgoals — ready to qed");

    const theorem = await store.qed("witness_example");
    expect(theorem).toBe(EXPECTED_THEOREM);

    // the stored theorem is retrievable by name, exactly as a REPL `thm`
    const viaThm = (await client.request("thm", { name: "witness_example" })) as {
      theorem: string;
    };
    expect(viaThm.theorem).toBe(EXPECTED_THEOREM);

    // keep the session for the revert test below
    expect(store.history.length).toBeGreaterThanOrEqual(7);
  }, 30000);

  it("history-tree revert restores the initial rendered goal", async () => {
    // the root of the history tree is the goal state
    const rootId = store.history[0]!.id;
    const tree = renderHistoryTree(store);
    const rootButton = tree.querySelector(
      `button[data-state-id="${rootId}"]`,
    ) as HTMLButtonElement;
    expect(rootButton).not.toBeNull();
    rootButton.click();
    await waitForIdle(store);
    expect(store.state!.goals).toHaveLength(1);
    expect(store.state!.goals[0]!.target).toBe(
      "phi (f one) → psi (f one) → ∃x. phi x ∧ psi x",
    );
    expect(store.state!.goals[0]!.assumptions).toEqual([]);
  }, 30000);

  it("a reconnected client reproduces the display from history + state", async () => {
    // same connection, fresh UI store: replaying `state` and `history`
    // rebuilds the identical rendering (the UI holds no private state)
    const fresh = new ProofStore(client);
    await fresh.refreshAll();
    expect(renderGoalPanel(fresh).innerHTML).toBe(renderGoalPanel(store).innerHTML);
    expect(renderHistoryTree(fresh).innerHTML).toBe(renderHistoryTree(store).innerHTML);
  }, 30000);

  it("a failing palette click surfaces the server error inline", async () => {
    const before = store.state;
    const ok = await store.applyTactic("rule conjI"); // target is an implication
    expect(ok).toBe(false);
    expect(store.lastError).toContain("tactic failed");
    expect(store.state).toBe(before);
    const panel = renderGoalPanel(store);
    expect(panel.querySelector(".error-banner")).not.toBeNull();
  }, 30000);

  it("countermodels come back as renderable tables", async () => {
    await store.setGoal("ALL x::ind. f (f x) = x");
    await store.findCounterexample(2);
    expect(store.countermodel).not.toBeNull();
    expect(store.countermodel!.domains["ind"]).toBeGreaterThanOrEqual(1);
  }, 30000);
});

async function waitForIdle(s: ProofStore): Promise<void> {
  for (let i = 0; i < 200 && s.busy; i++) {
    await new Promise((r) => setTimeout(r, 10));
  }
  // one extra tick for the post-revert meta sync
  await new Promise((r) => setTimeout(r, 50));
}
