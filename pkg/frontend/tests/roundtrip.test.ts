/**
 * End-to-end round trip against the real survey service.
 *
 * Spawns `plagbench serve` on a scratch store, then drives the actual UI
 * DOM (under jsdom) through one case ranking containing a tie and one
 * pair choice. The exported records must match the displayed final state
 * field for field, and nothing served to the UI may mention similarity
 * degrees or detector identifiers.
 */

import { spawn, spawnSync, type ChildProcess } from "node:child_process";
import { mkdtempSync, mkdirSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { createServer } from "node:net";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { SurveyApi } from "../src/api.js";
import { bootstrap } from "../src/main.js";

const PYTHON = process.env.PYTHON ?? "python3";
const ADMIN_TOKEN = "ui-test-token";

let workDir: string;
let server: ChildProcess | null = null;
let baseUrl: string;
const servedBodies: string[] = [];

function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const probe = createServer();
    probe.listen(0, "127.0.0.1", () => {
      const address = probe.address();
      if (address && typeof address === "object") {
        const port = address.port;
        probe.close(() => resolve(port));
      } else {
        reject(new Error("no port"));
      }
    });
  });
}

function writeCaseBundle(dir: string): void {
  const lines = ["int a = 1;\n", "int b = 2;\n", "int c = 3;\n", "int d = 4;\n"];
  const reorder = (order: number[]) => order.map((i) => lines[i]).join("");
  const bundle = {
    schemaVersion: 1,
    caseId: "ui-case",
    scope: "SINGLE_INSTRUCTION",
    seed: 0,
    original: lines.join(""),
    variants: [
      { id: "swap0", source: lines.join(""),
        transform: { kind: "adjacent-swaps", count: 0, positions: [], identity: true } },
      { id: "swap1", source: reorder([1, 0, 2, 3]),
        transform: { kind: "adjacent-swaps", count: 1, positions: [0], identity: false } },
      { id: "swap2", source: reorder([0, 2, 1, 3]),
        transform: { kind: "adjacent-swaps", count: 1, positions: [1], identity: false } },
      { id: "swap3", source: reorder([0, 1, 3, 2]),
        transform: { kind: "adjacent-swaps", count: 1, positions: [2], identity: false } },
    ],
  };
  writeFileSync(join(dir, "ui-case.case.json"), JSON.stringify(bundle, null, 2));
}

async function waitReady(base: string, deadlineMs = 20000): Promise<void> {
  const start = Date.now();
  while (Date.now() - start < deadlineMs) {
    try {
      const response = await fetch(`${base}/sessions/warmup/next`);
      if (response.status === 404 || response.status === 200) {
        return;
      }
    } catch {
      await new Promise((r) => setTimeout(r, 50));
    }
  }
  throw new Error("survey service did not come up");
}

async function waitFor<T>(probe: () => T | null, what: string,
                          timeoutMs = 10000): Promise<T> {
  const start = Date.now();
  for (;;) {
    const value = probe();
    if (value !== null) {
      return value;
    }
    if (Date.now() - start > timeoutMs) {
      throw new Error(`timed out waiting for ${what}`);
    }
    await new Promise((r) => setTimeout(r, 25));
  }
}

function query<T extends HTMLElement>(selector: string): T | null {
  return document.querySelector<T>(selector);
}

function mustQuery<T extends HTMLElement>(selector: string): T {
  const node = query<T>(selector);
  if (!node) {
    throw new Error(`missing element ${selector}`);
  }
  return node;
}

beforeAll(async () => {
  workDir = mkdtempSync(join(tmpdir(), "plagbench-ui-"));
  const casesDir = join(workDir, "cases");
  mkdirSync(casesDir);
  writeCaseBundle(casesDir);

  const manifestProbe = spawnSync(PYTHON, ["-c",
    "from importlib import resources;" +
    "print(str(resources.files('plagbench')/'fixtures'/'table_i'/'manifest.json'))"],
    { encoding: "utf-8" });
  if (manifestProbe.status !== 0) {
    throw new Error(`cannot locate bundled manifest: ${manifestProbe.stderr}`);
  }
  const manifest = manifestProbe.stdout.trim();

  const selection = join(workDir, "selection.json");
  const select = spawnSync(PYTHON, ["-m", "plagbench.cli", "select-pairs",
    "--manifest", manifest, "--out", selection], { encoding: "utf-8" });
  if (select.status !== 0) {
    throw new Error(`select-pairs failed: ${select.stderr}`);
  }

  const port = await freePort();
  baseUrl = `http://127.0.0.1:${port}`;
  server = spawn(PYTHON, ["-m", "plagbench.cli", "serve",
    "--store", join(workDir, "responses.log"),
    "--cases", casesDir,
    "--pairs", selection,
    "--manifest", manifest,
    "--groups", "1",
    "--bind", `127.0.0.1:${port}`,
    "--admin-token", ADMIN_TOKEN], { stdio: "ignore" });
  await waitReady(baseUrl);

  // record every body the service hands to the UI
  const realFetch = globalThis.fetch.bind(globalThis);
  globalThis.fetch = (async (input: RequestInfo | URL, init?: RequestInit) => {
    const response = await realFetch(input, init);
    servedBodies.push(await response.clone().text());
    return response;
  }) as typeof fetch;
});

afterAll(() => {
  server?.kill("SIGKILL");
  rmSync(workDir, { recursive: true, force: true });
});

describe("survey UI round trip", () => {
  it("performs a tied ranking and a pair choice that export verbatim", async () => {
    document.body.innerHTML = '<main id="app"></main>';
    window.location.hash = "";
    const root = document.getElementById("app") as HTMLElement;
    const api = new SurveyApi(baseUrl);

    // start a session through the actual start form
    await bootstrap(root, api);
    const label = mustQuery<HTMLInputElement>('[data-testid="respondent-label"]');
    label.value = "ui-round-trip";
    mustQuery('[data-testid="start"]').click();

    // --- task 1: case ranking with one tie -------------------------------
    await waitFor(() => query('[data-testid="card-code-1"]'), "ranking task");
    expect(mustQuery('[data-testid="progress"]').textContent).toBe("Task 1 of 3");
    const sessionId = window.location.hash.replace("#/session/", "");
    expect(sessionId).toMatch(/^[0-9a-f]{32}$/);

    // rank: code-2 first, then code-1 and code-3 tied, then code-4
    mustQuery('[data-testid="rank-next-code-2"]').click();
    mustQuery('[data-testid="rank-next-code-1"]').click();
    mustQuery('[data-testid="tie-code-3"]').click();
    mustQuery('[data-testid="rank-next-code-4"]').click();

    const displayedRanks: Record<string, number> = {};
    for (const labelName of ["code-1", "code-2", "code-3", "code-4"]) {
      const card = mustQuery(`[data-testid="card-${labelName}"]`);
      displayedRanks[labelName] = Number(card.dataset.rank);
    }
    expect(displayedRanks).toEqual({ "code-2": 1, "code-1": 2, "code-3": 2, "code-4": 4 });

    const submit = mustQuery<HTMLButtonElement>('[data-testid="submit"]');
    expect(submit.disabled).toBe(false);
    submit.click();

    // --- task 2: pair preference ------------------------------------------
    await waitFor(() => query('[data-testid="pair-code-1"]'), "pair task");
    expect(mustQuery('[data-testid="progress"]').textContent).toBe("Task 2 of 3");
    mustQuery('[data-testid="pair-code-2"]').click();
    expect(mustQuery('[data-testid="pair-code-2"]').dataset.selected).toBe("true");
    const chosenLabel = "code-2";
    mustQuery<HTMLButtonElement>('[data-testid="submit"]').click();

    // --- think-aloud prompt is dispensed, so both answers were accepted ----
    await waitFor(() => query('[data-testid="think-aloud-text"]'), "think-aloud task");
    expect(mustQuery('[data-testid="progress"]').textContent).toBe("Task 3 of 3");

    // --- export and compare field for field --------------------------------
    const exportResponse = await fetch(`${baseUrl}/export`, {
      headers: { "X-Admin-Token": ADMIN_TOKEN },
    });
    expect(exportResponse.status).toBe(200);
    const bundle = (await exportResponse.json()) as {
      responses: Array<{
        sessionId: string;
        taskId: string;
        kind: string;
        labels: Record<string, string>;
        payload: { ranks?: Record<string, number>; chosen?: string };
      }>;
    };
    expect(bundle.responses).toHaveLength(2);

    const [rankingRecord, pairRecord] = bundle.responses;
    expect(rankingRecord!.sessionId).toBe(sessionId);
    expect(rankingRecord!.kind).toBe("CASE_RANKING");
    expect(rankingRecord!.taskId).toBe("case:ui-case");
    const exportedRanks = rankingRecord!.payload.ranks!;
    expect(Object.keys(exportedRanks)).toHaveLength(4);
    for (const [labelName, rank] of Object.entries(displayedRanks)) {
      const variantId = rankingRecord!.labels[labelName]!;
      expect(exportedRanks[variantId]).toBe(rank);
    }

    expect(pairRecord!.sessionId).toBe(sessionId);
    expect(pairRecord!.kind).toBe("PAIR_PREFERENCE");
    const chosenMember = pairRecord!.labels[chosenLabel]!;
    expect(pairRecord!.payload.chosen).toBe(chosenMember);
    expect(pairRecord!.payload.ranks![chosenMember]).toBe(1);
    const otherMember = Object.values(pairRecord!.labels)
      .find((member) => member !== chosenMember)!;
    expect(pairRecord!.payload.ranks![otherMember]).toBe(2);
  });

  it("never serves similarity degrees or detector identifiers to the UI", () => {
    expect(servedBodies.length).toBeGreaterThan(0);
    const forbidden = ["similarity", "detector", "ABA", "SBA", "cosine",
      "tiling", "delta"];
    for (const body of servedBodies) {
      for (const token of forbidden) {
        expect(body).not.toContain(token);
      }
    }
  });

  it("rejects a double submission without losing UI state", async () => {
    // a second session: answer the ranking, then force a stale re-submit
    document.body.innerHTML = '<main id="app"></main>';
    window.location.hash = "";
    const root = document.getElementById("app") as HTMLElement;
    const api = new SurveyApi(baseUrl);

    const session = await api.createSession("double-submit-check");
    window.location.hash = `#/session/${session.sessionId}`;
    await bootstrap(root, api);
    await waitFor(() => query('[data-testid="card-code-1"]'), "ranking task");

    // direct API submit behind the UI's back, then the UI submits the same
    const task = await api.nextTask(session.sessionId);
    for (const labelName of ["code-1", "code-2", "code-3"]) {
      mustQuery(`[data-testid="rank-next-${labelName}"]`).click();
    }
    mustQuery('[data-testid="rank-next-code-4"]').click();
    await api.submitResponse(session.sessionId, task.taskId!, "CASE_RANKING", {
      ranks: { "code-1": 1, "code-2": 2, "code-3": 3, "code-4": 4 },
    });

    mustQuery<HTMLButtonElement>('[data-testid="submit"]').click();
    // DuplicateSubmission advances to the next pending task
    await waitFor(() => query('[data-testid="pair-code-1"]'), "pair task");
    expect(mustQuery('[data-testid="progress"]').textContent).toBe("Task 2 of 3");
  });
});
