import type { Server } from "node:http";
import type { AddressInfo } from "node:net";

import type { ModelBackend } from "../src/backend.js";
import { createApp } from "../src/server.js";

export interface TestServer {
  url: string;
  close(): Promise<void>;
}

export async function startTestServer(backend: ModelBackend): Promise<TestServer> {
  const app = createApp(backend);
  const server: Server = await new Promise((resolve, reject) => {
    const s = app.listen(0, "127.0.0.1");
    s.once("listening", () => resolve(s));
    s.once("error", reject);
  });
  const { port } = server.address() as AddressInfo;
  return {
    url: `http://127.0.0.1:${port}`,
    close: () =>
      new Promise<void>((resolve, reject) =>
        server.close((err) => (err ? reject(err) : resolve())),
      ),
  };
}

export interface WireReply {
  status: number;
  /** Raw body bytes as text, for byte-identity checks. */
  text: string;
  json: unknown;
}

export async function post(url: string, path: string, body: unknown): Promise<WireReply> {
  const res = await fetch(`${url}${path}`, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: typeof body === "string" ? body : JSON.stringify(body),
  });
  const text = await res.text();
  return { status: res.status, text, json: JSON.parse(text) };
}

export async function get(url: string, path: string): Promise<WireReply> {
  const res = await fetch(`${url}${path}`);
  const text = await res.text();
  return { status: res.status, text, json: JSON.parse(text) };
}
