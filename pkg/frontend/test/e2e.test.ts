/** Scripted end-to-end session against the real game service.
 *
 *  Spawns the Python service, loads the 9-state example system, and drives
 *  a full game through the typed client the UI uses: the human duplicator
 *  loses from (1,2) and the distinguishing formula is returned; every
 *  illegal move is rejected with the violated step condition named. */
import { spawn, type ChildProcess } from "node:child_process";
import { readFileSync } from "node:fs";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiError, GameServiceClient } from "../src/api.js";
import {
  applyGameResponse,
  applyRejection,
  asHistoryMove,
  initialViewModel,
  roleSelectWarning,
  type ViewModel,
} from "../src/model.js";
import { renderApp } from "../src/render.js";

const PORT = 8765 + (process.pid % 1000);
const BASE = `http://127.0.0.1:${PORT}`;
const LTS9 = readFileSync(
  join(__dirname, "..", "..", "tests", "fixtures", "lts9.csv"),
  "utf-8",
);

let server: ChildProcess;
const client = new GameServiceClient(BASE);

beforeAll(async () => {
  server = spawn(
    "python3",
    ["-m", "uvicorn", "bisimgame.service:create_app", "--factory",
     "--host", "127.0.0.1", "--port", String(PORT), "--log-level", "warning"],
    { stdio: "ignore" },
  );
  for (let i = 0; i < 100; i++) {
    try {
      await fetch(`${BASE}/docs`);
      return;
    } catch {
      await new Promise((r) => setTimeout(r, 100));
    }
  }
  throw new Error("service did not come up");
}, 20000);

afterAll(() => {
  server.kill();
});

describe("end-to-end play", () => {
  it("replays the scripted duplicator loss from (1,2)", async () => {
    const system = await client.createSystemFromCsv(LTS9);
    expect(system.states).toHaveLength(9);
    expect(roleSelectWarning(system, "1", "2")).toBeNull();
    expect(roleSelectWarning(system, "6", "7")).toContain(
      "duplicator has a winning strategy",
    );

    let vm: ViewModel = { ...initialViewModel(), system };
    const opened = await client.createGame(system.sessionId, "1", "2", "duplicator");
    vm = applyGameResponse(vm, opened, null);

    // engine spoiler opens with j=0, p0={4}
    expect(opened.engineMoves).toEqual([
      { phase: "step1", j: 0, predicate: ["4"] },
    ]);
    expect(vm.game!.state.phase).toBe("step2");
    expect(vm.game!.state.pendingPredicates.p0).toEqual(["4"]);
    expect(vm.game!.state.turn).toBe("duplicator");

    // an illegal answer is rejected with the step condition named
    let rejected: ApiError | null = null;
    try {
      await client.submitMove(system.sessionId, opened.gameId, {
        phase: "step2",
        payload: { predicate: ["8"] },
      });
    } catch (err) {
      rejected = err as ApiError;
    }
    expect(rejected).toBeInstanceOf(ApiError);
    expect(rejected!.status).toBe(409);
    expect(rejected!.detail).toContain("Step 2 condition");
    vm = applyRejection(vm, rejected!.detail);
    expect(renderApp(vm)).toContain("Step 2 condition");

    // an out-of-turn move is also rejected
    await expect(
      client.submitMove(system.sessionId, opened.gameId, {
        phase: "step3",
        payload: { ell: 0, state: "4" },
      }),
    ).rejects.toMatchObject({ status: 409 });

    // the legal answer {5} goes through; engine picks at step 3
    const afterP1 = await client.submitMove(system.sessionId, opened.gameId, {
      phase: "step2",
      payload: { predicate: ["5"] },
    });
    vm = applyGameResponse(
      vm,
      afterP1,
      asHistoryMove({ phase: "step2", payload: { predicate: ["5"] } }),
    );
    expect(afterP1.state.phase).toBe("step4");
    expect(afterP1.engineMoves[0].phase).toBe("step3");
    expect(afterP1.state.legalHints).toEqual(["4"]);

    // duplicator's forced step-4 answer moves to (4,5), where no reply exists
    const final = await client.submitMove(system.sessionId, opened.gameId, {
      phase: "step4",
      payload: { state: "4" },
    });
    vm = applyGameResponse(
      vm,
      final,
      asHistoryMove({ phase: "step4", payload: { state: "4" } }),
    );
    expect(final.state.position).toEqual(["4", "5"]);
    expect(final.winner).toBe("spoiler");
    expect(final.formula).toBeDefined();

    const served = await client.getFormula(system.sessionId, "1", "2");
    expect(final.formula).toBe(served.formula);

    // the formula is displayed in the rendered end screen
    const html = renderApp(vm);
    expect(html).toContain("spoiler wins");
    expect(html).toContain(`<code>${final.formula}</code>`);
    expect(vm.history[vm.history.length - 1]).toBe("game over: spoiler wins");
  });

  it("surfaces validation errors for a bad system", async () => {
    await expect(
      client.createSystemFromCsv(
        "kind,pts\nalphabet,a\nstate,x\ntrans,x,a,x,1/2\n",
      ),
    ).rejects.toMatchObject({
      status: 422,
      detail: expect.stringContaining("sums to 1/2"),
    });
  });
});
