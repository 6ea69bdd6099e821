// Application state: a thin cache of what the server last said, plus the
// history tree.  Reconnecting and replaying `history` + `state` rebuilds
// the display exactly (the store holds no locally derived formulas).

import { SessionClient } from "./client.js";
import { Countermodel, HistoryEntry, ProtocolError, StateView } from "./protocol.js";

export interface TreeNode {
  entry: HistoryEntry;
  children: TreeNode[];
}

export function buildHistoryTree(entries: HistoryEntry[]): TreeNode[] {
  const nodes = new Map<number, TreeNode>();
  const roots: TreeNode[] = [];
  for (const e of entries) {
    nodes.set(e.id, { entry: e, children: [] });
  }
  for (const e of entries) {
    const node = nodes.get(e.id)!;
    if (e.parent !== null && nodes.has(e.parent)) {
      nodes.get(e.parent)!.children.push(node);
    } else {
      roots.push(node);
    }
  }
  return roots;
}

export type Listener = () => void;

export class ProofStore {
  state: StateView | null = null;
  history: HistoryEntry[] = [];
  currentId: number | null = null;
  selectedGoal = 1;
  rules: string[] = [];
  lastError: string | null = null;
  lastTheorem: string | null = null;
  countermodel: Countermodel | null = null;
  busy = false;

  private listeners: Listener[] = [];

  constructor(public client: SessionClient) {}

  subscribe(fn: Listener): void {
    this.listeners.push(fn);
  }

  private emit(): void {
    for (const fn of this.listeners) fn();
  }

  private async run<T>(op: () => Promise<T>, after?: (out: T) => void): Promise<T | null> {
    this.busy = true;
    this.lastError = null;
    this.emit();
    try {
      const out = await op();
      if (after) after(out);
      return out;
    } catch (e) {
      // errors render inline; the displayed state is left untouched
      if (e instanceof ProtocolError) {
        this.lastError = `${e.kind}: ${e.message}`;
      } else {
        this.lastError = String(e);
      }
      return null;
    } finally {
      this.busy = false;
      this.emit();
    }
  }

  private async syncMeta(): Promise<void> {
    const hist = await this.client.history();
    this.history = hist.states;
    this.currentId = hist.current;
    if (this.state && this.state.goals.length > 0) {
      if (this.selectedGoal > this.state.goals.length) this.selectedGoal = 1;
      this.rules = await this.client.rules(this.selectedGoal);
    } else {
      this.rules = [];
    }
  }

  async loadTheory(name: string): Promise<void> {
    await this.run(() => this.client.loadTheory(name));
  }

  async setGoal(formula: string): Promise<void> {
    await this.run(async () => {
      this.state = await this.client.goal(formula);
      this.lastTheorem = null;
      this.countermodel = null;
      this.selectedGoal = 1;
      await this.syncMeta();
    });
  }

  async applyTactic(tactic: string, goal?: number): Promise<boolean> {
    const out = await this.run(async () => {
      this.state = await this.client.apply(tactic, goal ?? this.selectedGoal);
      await this.syncMeta();
      return true;
    });
    return out === true;
  }

  async applyRule(name: string): Promise<boolean> {
    return this.applyTactic(`rule ${name}`);
  }

  async undo(): Promise<void> {
    await this.run(async () => {
      this.state = await this.client.undo();
      await this.syncMeta();
    });
  }

  async revert(stateId: number): Promise<void> {
    await this.run(async () => {
      this.state = await this.client.revert(stateId);
      await this.syncMeta();
    });
  }

  async qed(name?: string): Promise<string | null> {
    const out = await this.run(async () => {
      const res = await this.client.qed(name);
      this.lastTheorem = res.theorem;
      this.state = { goals: [], placeholders: {} };
      return res.theorem;
    });
    return out;
  }

  async findCounterexample(maxSize: number): Promise<void> {
    await this.run(async () => {
      this.countermodel = await this.client.cex(maxSize);
    });
  }

  async selectGoal(index: number): Promise<void> {
    this.selectedGoal = index;
    await this.run(async () => {
      if (this.state && this.state.goals.length > 0) {
        this.rules = await this.client.rules(index);
      }
    });
  }

  // Reconnect support: everything displayed is reproducible from the
  // server's history and state commands.
  async refreshAll(): Promise<void> {
    await this.run(async () => {
      this.state = await this.client.state();
      await this.syncMeta();
    });
  }
}
