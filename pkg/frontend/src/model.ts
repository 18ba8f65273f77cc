/** Pure view-model: a projection of the last server response plus the
 *  in-progress selection.  Everything here is DOM-free and deterministic,
 *  so the rendering layer can be snapshot-tested. */

import type {
  EngineMove,
  GameResponse,
  GameStateJson,
  MovePayload,
  Role,
  Step3Hint,
  SystemInfo,
  Verdict,
} from "./api.js";

export const TURN_COLORS: Record<Role, string> = {
  spoiler: "violet",
  duplicator: "cyan",
};

export interface ViewModel {
  system: SystemInfo | null;
  game: GameResponse | null;
  /** states ticked in the predicate picker (step 1/2 input) */
  selection: string[];
  /** j chosen for a step-1 move */
  selectedJ: number;
  /** last rejected move's server-side reason, shown inline */
  error: string | null;
  /** human-readable transcript, oldest first */
  history: string[];
}

export function initialViewModel(): ViewModel {
  return {
    system: null,
    game: null,
    selection: [],
    selectedJ: 0,
    error: null,
    history: [],
  };
}

export function turnColor(state: GameStateJson): string | null {
  return state.turn === null ? null : TURN_COLORS[state.turn];
}

export function verdictFor(
  system: SystemInfo,
  x0: string,
  x1: string,
): Verdict | null {
  if (x0 === x1) {
    return { x0, x1, bisimilar: true, separationRound: null };
  }
  return (
    system.verdicts.find(
      (v) =>
        (v.x0 === x0 && v.x1 === x1) || (v.x0 === x1 && v.x1 === x0),
    ) ?? null
  );
}

/** Warning for the role-select screen on pairs the human spoiler cannot win. */
export function roleSelectWarning(
  system: SystemInfo,
  x0: string,
  x1: string,
): string | null {
  const v = verdictFor(system, x0, x1);
  if (v && v.bisimilar) {
    return `${x0} and ${x1} are bisimilar: duplicator has a winning strategy`;
  }
  return null;
}

export function toggleSelection(vm: ViewModel, state: string): ViewModel {
  const selection = vm.selection.includes(state)
    ? vm.selection.filter((s) => s !== state)
    : [...vm.selection, state].sort();
  return { ...vm, selection };
}

/** The move the current selection would submit, or null if the phase needs a
 *  pick from legalHints instead. */
export function moveFromSelection(vm: ViewModel): MovePayload | null {
  const phase = vm.game?.state.phase;
  if (phase === "step1") {
    return {
      phase: "step1",
      payload: { j: vm.selectedJ, predicate: vm.selection },
    };
  }
  if (phase === "step2") {
    return { phase: "step2", payload: { predicate: vm.selection } };
  }
  return null;
}

export function moveFromHint(hint: Step3Hint | string): MovePayload {
  if (typeof hint === "string") {
    return { phase: "step4", payload: { state: hint } };
  }
  return { phase: "step3", payload: { ell: hint.ell, state: hint.state } };
}

export function describeMove(by: string, move: EngineMove): string {
  switch (move.phase) {
    case "step1":
      return `${by}: step 1, j=${move.j}, predicate {${(move.predicate ?? []).join(", ")}}`;
    case "step2":
      return `${by}: step 2, predicate {${(move.predicate ?? []).join(", ")}}`;
    case "step3":
      return `${by}: step 3, side ${move.ell}, state ${move.state}`;
    case "step4":
      return `${by}: step 4, state ${move.state}`;
  }
}

export function applySystem(system: SystemInfo): ViewModel {
  return { ...initialViewModel(), system };
}

export function applyGameResponse(
  vm: ViewModel,
  resp: GameResponse,
  humanMove: EngineMove | null,
): ViewModel {
  const engineName =
    resp.state.humanRole === "spoiler" ? "duplicator (engine)" : "spoiler (engine)";
  const history = [...vm.history];
  if (humanMove) history.push(describeMove(`you (${resp.state.humanRole})`, humanMove));
  for (const mv of resp.engineMoves) history.push(describeMove(engineName, mv));
  if (resp.winner) history.push(`game over: ${resp.winner} wins`);
  return { ...vm, game: resp, selection: [], error: null, history };
}

export function applyRejection(vm: ViewModel, detail: string): ViewModel {
  return { ...vm, error: `illegal move: ${detail}` };
}

/** Echo of a submitted move in EngineMove shape, for the history line. */
export function asHistoryMove(move: MovePayload): EngineMove {
  switch (move.phase) {
    case "step1":
      return { phase: "step1", j: move.payload.j, predicate: move.payload.predicate };
    case "step2":
      return { phase: "step2", predicate: move.payload.predicate };
    case "step3":
      return { phase: "step3", ell: move.payload.ell, state: move.payload.state };
    case "step4":
      return { phase: "step4", state: move.payload.state };
  }
}
