/**
 * Full console loop against a live service: create session, upload an
 * identical image pair (second novelty panel must be all black), reset the
 * memory, re-upload (novel again), with the memory panel count checked
 * against GET /memory at every step.
 *
 * Uses NOVASCOUT_SERVICE_URL when set; otherwise spawns `novascout serve`
 * on a local port. Set REQUIRE_SERVICE=1 (as `npm run test:acceptance`
 * does) to fail instead of skip when no service can be reached.
 */

import { type ChildProcess, spawn } from "node:child_process";
import { mkdtempSync, readFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ConsoleApi } from "../src/api.js";
import { ConsoleState } from "../src/state.js";
import { decodePng, isAllBlack } from "./png.js";

const here = dirname(fileURLToPath(import.meta.url));
const REQUIRE_SERVICE = process.env.REQUIRE_SERVICE === "1";

let baseUrl = process.env.NOVASCOUT_SERVICE_URL ?? "";
let child: ChildProcess | null = null;
let available = false;

async function healthy(url: string): Promise<boolean> {
  try {
    const r = await fetch(`${url}/healthz`);
    return r.ok;
  } catch {
    return false;
  }
}

beforeAll(async () => {
  if (!baseUrl) {
    const port = 8740 + Math.floor(Math.random() * 200);
    baseUrl = `http://127.0.0.1:${port}`;
    const out = mkdtempSync(join(tmpdir(), "novascout-console-"));
    child = spawn("novascout",
                  ["serve", "--port", String(port), "--out", out],
                  { stdio: "ignore" });
    child.on("error", () => { /* reported via the health probe below */ });
  }
  for (let i = 0; i < 60 && !available; i++) {
    available = await healthy(baseUrl);
    if (!available) {
      await new Promise((resolve) => setTimeout(resolve, 250));
    }
  }
  if (!available && REQUIRE_SERVICE) {
    throw new Error(`no reachable service at ${baseUrl}`);
  }
}, 30000);

afterAll(() => {
  child?.kill();
});

describe("console loop", () => {
  it(
    "create / upload pair / black novelty / reset / novel again",
    async (ctx) => {
      if (!available) {
        // beforeAll already threw under REQUIRE_SERVICE=1.
        ctx.skip();
        return;
      }
      const api = new ConsoleApi(baseUrl);
      const state = new ConsoleState();
      const image = readFileSync(join(here, "fixtures", "pair_1.png"));

      const info = await api.createSession({ mode: "novelty" });
      state.startSession(info);
      expect((await api.getMemory(info.id)).stored_count).toBe(0);

      // First upload: everything novel on a fresh memory.
      expect(state.beginUpload()).toBe(true);
      const first = await api.submitImage(info.id, image);
      state.completeUpload(first);
      expect(first.segments.length).toBeGreaterThan(0);
      expect(first.segments.every((s) => s.novel)).toBe(true);
      let memory = await api.getMemory(info.id);
      expect(memory.stored_count).toBe(first.segments.length);
      expect(memory.patterns?.length).toBe(first.segments.length);

      // Identical second upload: all familiar, novelty panel all black.
      expect(state.beginUpload()).toBe(true);
      const second = await api.submitImage(info.id, image);
      state.completeUpload(second);
      expect(second.segments.every((s) => !s.novel)).toBe(true);
      const noveltyUrl = second.map_urls["novelty"];
      expect(noveltyUrl).toBeTruthy();
      const pngResponse = await fetch(api.absolute(noveltyUrl));
      expect(pngResponse.ok).toBe(true);
      const png = decodePng(new Uint8Array(await pngResponse.arrayBuffer()));
      expect(isAllBlack(png)).toBe(true);
      memory = await api.getMemory(info.id);
      expect(memory.stored_count).toBe(first.segments.length); // unchanged

      // Reset: memory panel count drops to zero.
      await api.resetMemory(info.id);
      memory = await api.getMemory(info.id);
      expect(memory.stored_count).toBe(0);

      // Re-upload: novel again on the zeroed memory.
      expect(state.beginUpload()).toBe(true);
      const third = await api.submitImage(info.id, image);
      state.completeUpload(third);
      expect(third.segments.every((s) => s.novel)).toBe(true);
      memory = await api.getMemory(info.id);
      expect(memory.stored_count).toBe(third.segments.length);

      // History replay invariant: each stored record is rendered as-is.
      expect(state.history.map((r) => r.image_index)).toEqual([0, 1, 2]);
      state.selectResult(1);
      expect(state.selected).toBe(second);
    },
    30000,
  );
});
