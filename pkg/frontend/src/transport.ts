// Browser transport: the session protocol carried over a bridge process.
// The bridge pairs each posted request line with the response line bearing
// the same id, so the schema on the wire is exactly the server's.

import { Transport } from "./client.js";

export class HttpTransport implements Transport {
  private handlers: Array<(line: string) => void> = [];

  constructor(private endpoint: string = "/rpc") {}

  send(line: string): void {
    void fetch(this.endpoint, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: line,
    })
      .then(async (resp) => {
        const text = await resp.text();
        for (const handler of this.handlers) handler(text.trimEnd());
      })
      .catch((err) => {
        const fallback = JSON.stringify({
          id: safeId(line),
          ok: false,
          error: { kind: "TransportError", msg: String(err) },
        });
        for (const handler of this.handlers) handler(fallback);
      });
  }

  onLine(cb: (line: string) => void): void {
    this.handlers.push(cb);
  }

  close(): void {
    this.handlers = [];
  }
}

function safeId(line: string): number | null {
  try {
    const obj = JSON.parse(line) as { id?: number };
    return obj.id ?? null;
  } catch {
    return null;
  }
}
