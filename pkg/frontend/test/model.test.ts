import { describe, expect, it } from "vitest";

import type { GameResponse, GameStateJson, SystemInfo } from "../src/api.js";
import {
  applyGameResponse,
  applyRejection,
  asHistoryMove,
  describeMove,
  initialViewModel,
  moveFromHint,
  moveFromSelection,
  roleSelectWarning,
  toggleSelection,
  turnColor,
} from "../src/model.js";

const system: SystemInfo = {
  sessionId: "s",
  kind: "lts",
  states: ["1", "2", "6", "7"],
  alphabet: ["a"],
  transitions: [],
  blocks: [["1"], ["2"], ["6", "7"]],
  verdicts: [
    { x0: "1", x1: "2", bisimilar: false, separationRound: 2 },
    { x0: "6", x1: "7", bisimilar: true, separationRound: null },
  ],
};

function state(partial: Partial<GameStateJson>): GameStateJson {
  return {
    phase: "step2",
    position: ["1", "2"],
    round: 1,
    j: 0,
    ell: null,
    pick: null,
    pendingPredicates: { p0: ["4"], p1: null },
    legalHints: [],
    humanRole: "duplicator",
    turn: "duplicator",
    ...partial,
  };
}

describe("turn colors", () => {
  it("is violet for spoiler and cyan for duplicator", () => {
    expect(turnColor(state({ turn: "spoiler" }))).toBe("violet");
    expect(turnColor(state({ turn: "duplicator" }))).toBe("cyan");
    expect(turnColor(state({ turn: null }))).toBeNull();
  });
});

describe("role-select warning", () => {
  it("warns on bisimilar pairs in either order", () => {
    expect(roleSelectWarning(system, "6", "7")).toContain(
      "duplicator has a winning strategy",
    );
    expect(roleSelectWarning(system, "7", "6")).toContain(
      "duplicator has a winning strategy",
    );
  });

  it("is silent on separated pairs", () => {
    expect(roleSelectWarning(system, "1", "2")).toBeNull();
  });
});

describe("predicate selection", () => {
  it("toggles and keeps a sorted selection", () => {
    let vm = initialViewModel();
    vm = toggleSelection(vm, "7");
    vm = toggleSelection(vm, "2");
    expect(vm.selection).toEqual(["2", "7"]);
    vm = toggleSelection(vm, "7");
    expect(vm.selection).toEqual(["2"]);
  });

  it("builds step-1 and step-2 moves from the selection", () => {
    const game: GameResponse = {
      gameId: "g",
      state: state({ phase: "step1", turn: "spoiler", humanRole: "spoiler" }),
      engineMoves: [],
    };
    let vm = { ...initialViewModel(), system, game, selectedJ: 1 };
    vm = toggleSelection(vm, "2");
    expect(moveFromSelection(vm)).toEqual({
      phase: "step1",
      payload: { j: 1, predicate: ["2"] },
    });
    vm.game!.state = state({ phase: "step2" });
    expect(moveFromSelection(vm)).toEqual({
      phase: "step2",
      payload: { predicate: ["2"] },
    });
    vm.game!.state = state({ phase: "step3" });
    expect(moveFromSelection(vm)).toBeNull();
  });
});

describe("hint moves", () => {
  it("maps step-3 and step-4 hints to move payloads", () => {
    expect(moveFromHint({ ell: 1, state: "4" }))
      .toEqual({ phase: "step3", payload: { ell: 1, state: "4" } });
    expect(moveFromHint("5")).toEqual({
      phase: "step4",
      payload: { state: "5" },
    });
  });
});

describe("history and errors", () => {
  it("records the human move, engine replies, and the result", () => {
    let vm = { ...initialViewModel(), system };
    const resp: GameResponse = {
      gameId: "g",
      state: state({ phase: "spoiler_won", turn: null, winner: "spoiler" }),
      engineMoves: [{ phase: "step3", ell: 0, state: "4" }],
      winner: "spoiler",
      formula: "[^{(a,1)}]tt",
    };
    vm = applyGameResponse(
      vm,
      resp,
      asHistoryMove({ phase: "step2", payload: { predicate: ["5"] } }),
    );
    expect(vm.history).toEqual([
      "you (duplicator): step 2, predicate {5}",
      "spoiler (engine): step 3, side 0, state 4",
      "game over: spoiler wins",
    ]);
    expect(vm.selection).toEqual([]);
    expect(vm.error).toBeNull();
  });

  it("keeps the server's reason for a rejected move", () => {
    const vm = applyRejection(
      initialViewModel(),
      "Step 2 condition Fp_j(alpha(x_j)) <=F Fp_{1-j}(alpha(x_{1-j})) fails",
    );
    expect(vm.error).toContain("illegal move:");
    expect(vm.error).toContain("Step 2 condition");
  });

  it("describes every move phase", () => {
    expect(describeMove("x", { phase: "step1", j: 0, predicate: ["4"] }))
      .toBe("x: step 1, j=0, predicate {4}");
    expect(describeMove("x", { phase: "step4", state: "4" }))
      .toBe("x: step 4, state 4");
  });
});
