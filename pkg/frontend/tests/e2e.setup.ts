/** Starts the Python policy service for the end-to-end suite and tears it
 * down afterwards. */

import { spawn, type ChildProcess } from "node:child_process";

const PORT = 8931;
export const BASE_URL = `http://127.0.0.1:${PORT}`;

async function waitForHealthy(timeoutMs: number): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    try {
      const res = await fetch(`${BASE_URL}/healthz`);
      if (res.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 250));
  }
  throw new Error(`service did not become healthy within ${timeoutMs}ms`);
}

let child: ChildProcess;

export async function setup(): Promise<void> {
  child = spawn(
    process.env.PYTHON ?? "python3",
    ["-m", "cybertweak.cli", "serve", "--host", "127.0.0.1", "--port", String(PORT)],
    { stdio: "inherit" },
  );
  await waitForHealthy(60_000);
}

export async function teardown(): Promise<void> {
  child.kill("SIGTERM");
  await new Promise((resolve) => setTimeout(resolve, 300));
  if (!child.killed) child.kill("SIGKILL");
}
