// Wire types for the prover's line-delimited JSON protocol.  The message
// schema is defined by the backend; the UI treats every formula string as
// opaque, server-rendered text.

export interface Request {
  id: number;
  cmd: string;
  args?: Record<string, unknown>;
}

export interface ErrorPayload {
  kind: string;
  msg: string;
}

export interface Response {
  id: number | null;
  ok: boolean;
  result?: unknown;
  error?: ErrorPayload;
}

export interface GoalView {
  index: number;
  params: string[];
  assumptions: string[];
  target: string;
}

export interface StateView {
  goals: GoalView[];
  placeholders: Record<string, string>;
}

export interface HistoryEntry {
  id: number;
  parent: number | null;
  label: string;
}

export interface HistoryView {
  states: HistoryEntry[];
  current: number | null;
}

export interface QedView {
  name: string | null;
  theorem: string;
}

export interface Countermodel {
  domains: Record<string, number>;
  constants: Record<string, Record<string, unknown>>;
  variables: Record<string, unknown>;
}

export class ProtocolError extends Error {
  constructor(public kind: string, msg: string) {
    super(msg);
  }
}

export function parseResponse(line: string): Response {
  const obj = JSON.parse(line) as Response;
  if (typeof obj !== "object" || obj === null || !("ok" in obj)) {
    throw new ProtocolError("ParseError", `malformed response: ${line}`);
  }
  return obj;
}

// Incremental splitter for newline-delimited streams.
export class LineBuffer {
  private buf = "";

  push(chunk: string): string[] {
    this.buf += chunk;
    const parts = this.buf.split("\n");
    this.buf = parts.pop() ?? "";
    return parts.filter((p) => p.trim().length > 0);
  }

  flush(): string[] {
    const rest = this.buf.trim();
    this.buf = "";
    return rest ? [rest] : [];
  }
}
