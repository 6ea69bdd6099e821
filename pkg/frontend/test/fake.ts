// In-memory transport with scripted responses, for unit tests.

import { Transport } from "../src/client.js";

type Handler = (line: string) => void;

export class FakeTransport implements Transport {
  handlers: Handler[] = [];
  sent: Array<Record<string, unknown>> = [];
  // cmd -> responder(request) => result object or throws {kind,msg}
  responders = new Map<string, (req: any) => unknown>();
  autoRespond = true;

  send(line: string): void {
    const req = JSON.parse(line);
    this.sent.push(req);
    if (!this.autoRespond) return;
    const responder = this.responders.get(req.cmd);
    let resp;
    if (!responder) {
      resp = { id: req.id, ok: false, error: { kind: "NotFoundError", msg: `unknown ${req.cmd}` } };
    } else {
      try {
        resp = { id: req.id, ok: true, result: responder(req) };
      } catch (e: any) {
        resp = { id: req.id, ok: false, error: { kind: e.kind ?? "Error", msg: e.msg ?? String(e) } };
      }
    }
    queueMicrotask(() => this.emit(JSON.stringify(resp)));
  }

  emit(line: string): void {
    for (const h of this.handlers) h(line);
  }

  onLine(cb: Handler): void {
    this.handlers.push(cb);
  }

  close(): void {}
}

export function emptyState() {
  return { goals: [], placeholders: {} };
}

export function stateWith(goals: Array<{ index: number; target: string; assumptions?: string[]; params?: string[] }>, placeholders: Record<string, string> = {}) {
  return {
    goals: goals.map((g) => ({
      index: g.index,
      params: g.params ?? [],
      assumptions: g.assumptions ?? [],
      target: g.target,
    })),
    placeholders,
  };
}
