import { describe, expect, it } from "vitest";

import type { GameResponse, SystemInfo } from "../src/api.js";
import { initialViewModel, type ViewModel } from "../src/model.js";
import {
  escapeHtml,
  renderApp,
  renderGamePanel,
  renderGraph,
  renderVerdicts,
} from "../src/render.js";

const system: SystemInfo = {
  sessionId: "s",
  kind: "lts",
  states: ["1", "2", "4", "5"],
  alphabet: ["a", "b"],
  transitions: [
    { src: "1", label: "a", dst: "4" },
    { src: "2", label: "a", dst: "5" },
  ],
  blocks: [["1"], ["2"], ["4"], ["5"]],
  verdicts: [{ x0: "1", x1: "2", bisimilar: false, separationRound: 2 }],
};

const finishedGame: GameResponse = {
  gameId: "g",
  state: {
    phase: "spoiler_won",
    position: ["4", "5"],
    round: 2,
    j: 0,
    ell: null,
    pick: null,
    pendingPredicates: { p0: null, p1: null },
    legalHints: [],
    humanRole: "duplicator",
    turn: null,
    winner: "spoiler",
  },
  engineMoves: [],
  winner: "spoiler",
  formula: "[^{(a,1)}]tt",
};

function vmWith(partial: Partial<ViewModel>): ViewModel {
  return { ...initialViewModel(), system, ...partial };
}

describe("rendering", () => {
  it("is deterministic for a given view-model", () => {
    const vm = vmWith({ game: finishedGame, history: ["game over"] });
    expect(renderApp(vm)).toBe(renderApp(vm));
  });

  it("highlights the current position in the graph", () => {
    const svg = renderGraph(system, ["4", "5"]);
    expect(svg).toContain('class="node current" data-state="4"');
    expect(svg).toContain('class="node" data-state="1"');
  });

  it("shows verdicts with separation rounds", () => {
    const html = renderVerdicts(system);
    expect(html).toContain("separated at round 2");
  });

  it("shows the winner and the distinguishing formula", () => {
    const html = renderGamePanel(vmWith({ game: finishedGame }));
    expect(html).toContain("spoiler wins");
    expect(html).toContain("<code>[^{(a,1)}]tt</code>");
  });

  it("colors the pending turn", () => {
    const running: GameResponse = {
      ...finishedGame,
      state: {
        ...finishedGame.state,
        phase: "step2",
        turn: "duplicator",
        winner: undefined,
        pendingPredicates: { p0: ["4"], p1: null },
      },
      winner: undefined,
      formula: undefined,
    };
    const html = renderGamePanel(vmWith({ game: running }));
    expect(html).toContain("background:cyan");
    expect(html).toContain("p0 = {4}");
    expect(html).toContain("data-pick=");
  });

  it("shows the server's rejection reason inline", () => {
    const html = renderGamePanel(
      vmWith({ game: finishedGame, error: "illegal move: Step 2 condition" }),
    );
    expect(html).toContain("illegal move: Step 2 condition");
  });

  it("escapes markup in identifiers", () => {
    expect(escapeHtml("<s>&")).toBe("&lt;s&gt;&amp;");
  });
});
