/**
 * Wire protocol v1 over express. Request bodies are validated strictly
 * before they reach the backend; backend failures surface as 503 so the
 * attack client can retry, malformed input as 400 so it does not.
 */
import express from "express";
import type { Server } from "node:http";
import type { AddressInfo } from "node:net";

import type { ModelBackend } from "./backend.js";
import { loadBackend } from "./backend.js";
import type { ShimConfig } from "./config.js";
import {
  generateNameRequestSchema,
  generateRequestSchema,
} from "./protocol.js";
import { RequestQueue } from "./queue.js";

export const HEALTH_PATH = "/v1/health";
export const GENERATE_PATH = "/v1/generate";
export const GENERATE_NAME_PATH = "/v1/generate_name";

export function createApp(backend: ModelBackend): express.Express {
  const app = express();
  const queue = new RequestQueue();
  app.use(express.json());

  app.get(HEALTH_PATH, (_req, res) => {
    res.json({ ok: true });
  });

  app.post(GENERATE_PATH, (req, res) => {
    const parsed = generateRequestSchema.safeParse(req.body);
    if (!parsed.success) {
      res.status(400).json({ error: "malformed request body" });
      return;
    }
    const request = parsed.data;
    if (request.mode === "fd_sig" && request.signature === null) {
      res.status(400).json({ error: "fd_sig requires a signature" });
      return;
    }
    queue
      .run(() => backend.generateCode(request))
      .then((code) => res.json({ code }))
      .catch(() => res.status(503).json({ error: "model unavailable" }));
  });

  app.post(GENERATE_NAME_PATH, (req, res) => {
    const parsed = generateNameRequestSchema.safeParse(req.body);
    if (!parsed.success) {
      res.status(400).json({ error: "malformed request body" });
      return;
    }
    const { prompt } = parsed.data;
    queue
      .run(() => backend.generateName(prompt))
      .then((name) => res.json({ name }))
      .catch(() => res.status(503).json({ error: "model unavailable" }));
  });

  app.use((_req, res) => {
    res.status(404).json({ error: "unknown endpoint" });
  });

  // express only routes body-parser failures here; keep them indistinguishable
  // from any other malformed body
  app.use(
    (
      _err: unknown,
      _req: express.Request,
      res: express.Response,
      _next: express.NextFunction,
    ) => {
      res.status(400).json({ error: "malformed request body" });
    },
  );

  return app;
}

export interface RunningServer {
  port: number;
  close(): Promise<void>;
}

/** Load the configured model and bind the app; throws if loading fails. */
export async function startServer(config: ShimConfig): Promise<RunningServer> {
  const backend = loadBackend(config);
  if (config.decoding === "sample") {
    console.warn("sample decoding: identical requests will not be byte-identical");
  }
  const app = createApp(backend);
  const server: Server = await new Promise((resolve, reject) => {
    const s = app.listen(config.port, "127.0.0.1");
    s.once("listening", () => resolve(s));
    s.once("error", reject);
  });
  const port = (server.address() as AddressInfo).port;
  return {
    port,
    close: () =>
      new Promise<void>((resolve, reject) => {
        server.close((err) => (err ? reject(err) : resolve()));
      }),
  };
}
