// Session client: one command in flight at a time, matched to its response
// by id (a `cancel` may overtake the answer of the request it interrupts).

import {
  Countermodel,
  HistoryView,
  ProtocolError,
  QedView,
  Request,
  Response,
  StateView,
  parseResponse,
} from "./protocol.js";

export interface Transport {
  send(line: string): void;
  onLine(cb: (line: string) => void): void;
  close(): void;
}

interface Pending {
  resolve: (value: unknown) => void;
  reject: (err: Error) => void;
}

export class SessionClient {
  private nextId = 1;
  private pending = new Map<number, Pending>();
  private queue: Array<() => void> = [];
  private inFlight: number | null = null;

  constructor(private transport: Transport) {
    transport.onLine((line) => this.handleLine(line));
  }

  get busyRequest(): number | null {
    return this.inFlight;
  }

  request(cmd: string, args?: Record<string, unknown>): Promise<unknown> {
    const id = this.nextId++;
    return new Promise((resolve, reject) => {
      const fire = () => {
        this.inFlight = id;
        this.pending.set(id, { resolve, reject });
        const req: Request = { id, cmd, args: args ?? {} };
        this.transport.send(JSON.stringify(req));
      };
      if (this.inFlight === null) {
        fire();
      } else {
        this.queue.push(fire);
      }
    });
  }

  // Cancellation bypasses the single-flight queue on purpose: it refers to
  // the request currently running.
  cancel(requestId: number): Promise<unknown> {
    const id = this.nextId++;
    return new Promise((resolve, reject) => {
      this.pending.set(id, { resolve, reject });
      this.transport.send(JSON.stringify({ id, cmd: "cancel", args: { request: requestId } }));
    });
  }

  close(): void {
    this.transport.close();
  }

  private handleLine(line: string): void {
    let resp: Response;
    try {
      resp = parseResponse(line);
    } catch {
      return; // not addressed to us; leave pending requests untouched
    }
    const id = resp.id;
    if (typeof id !== "number") return;
    const waiter = this.pending.get(id);
    if (!waiter) return;
    this.pending.delete(id);
    if (this.inFlight === id) {
      this.inFlight = null;
      const next = this.queue.shift();
      if (next) next();
    }
    if (resp.ok) {
      waiter.resolve(resp.result);
    } else {
      const err = resp.error ?? { kind: "InternalError", msg: "unknown error" };
      waiter.reject(new ProtocolError(err.kind, err.msg));
    }
  }

  // ------------------------------------------------------ typed commands

  loadTheory(name: string): Promise<unknown> {
    return this.request("load", { name });
  }

  goal(formula: string): Promise<StateView> {
    return this.request("goal", { formula }) as Promise<StateView>;
  }

  apply(tactic: string, goal = 1, alt = 0): Promise<StateView> {
    return this.request("apply", { tactic, goal, alt }) as Promise<StateView>;
  }

  state(): Promise<StateView> {
    return this.request("state") as Promise<StateView>;
  }

  history(): Promise<HistoryView> {
    return this.request("history") as Promise<HistoryView>;
  }

  revert(stateId: number): Promise<StateView> {
    return this.request("revert", { state: stateId }) as Promise<StateView>;
  }

  undo(): Promise<StateView> {
    return this.request("undo") as Promise<StateView>;
  }

  qed(name?: string): Promise<QedView> {
    return this.request("qed", name ? { name } : {}) as Promise<QedView>;
  }

  rules(goal = 1): Promise<string[]> {
    return (this.request("rules", { goal }) as Promise<{ rules: string[] }>).then((r) => r.rules);
  }

  theorems(prefix = ""): Promise<string[]> {
    return (this.request("theorems", { prefix }) as Promise<{ theorems: string[] }>).then(
      (r) => r.theorems,
    );
  }

  cex(maxSize: number): Promise<Countermodel | null> {
    return (
      this.request("cex", { max_size: maxSize }) as Promise<{ countermodel: Countermodel | null }>
    ).then((r) => r.countermodel);
  }
}
