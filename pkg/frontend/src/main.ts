/** DOM wiring: holds the view-model, re-renders after every confirmed
 *  server response, and translates clicks into API calls.  At most one
 *  move request is in flight per game; the server is the authority. */

import { ApiError, GameServiceClient, type MovePayload, type Role } from "./api.js";
import {
  applyGameResponse,
  applyRejection,
  applySystem,
  asHistoryMove,
  initialViewModel,
  moveFromHint,
  moveFromSelection,
  roleSelectWarning,
  toggleSelection,
  type ViewModel,
} from "./model.js";
import { renderApp } from "./render.js";

const client = new GameServiceClient("");
let vm: ViewModel = initialViewModel();
let inFlight = false;

function $(id: string): HTMLElement {
  return document.getElementById(id)!;
}

function render(): void {
  $("app").innerHTML = renderApp(vm);
  const system = vm.system;
  const x0 = (($("x0") as HTMLSelectElement).value ||= system?.states[0] ?? "");
  const x1 = (($("x1") as HTMLSelectElement).value ||= system?.states[1] ?? "");
  const warning = system ? roleSelectWarning(system, x0, x1) : null;
  $("role-warning").textContent = warning ?? "";
}

function fillPairSelectors(): void {
  for (const id of ["x0", "x1"]) {
    const sel = $(id) as HTMLSelectElement;
    sel.innerHTML = (vm.system?.states ?? [])
      .map((s) => `<option>${s}</option>`)
      .join("");
  }
}

async function submit(move: MovePayload): Promise<void> {
  if (!vm.system || !vm.game || inFlight) return;
  inFlight = true;
  try {
    const resp = await client.submitMove(
      vm.system.sessionId,
      vm.game.gameId,
      move,
    );
    vm = applyGameResponse(vm, resp, asHistoryMove(move));
  } catch (err) {
    if (err instanceof ApiError) {
      vm = applyRejection(vm, err.detail);
    } else {
      throw err;
    }
  } finally {
    inFlight = false;
  }
  render();
}

function wire(): void {
  $("load").addEventListener("click", async () => {
    const csv = ($("csv") as HTMLTextAreaElement).value;
    try {
      vm = applySystem(await client.createSystemFromCsv(csv));
      fillPairSelectors();
      $("load-error").textContent = "";
    } catch (err) {
      $("load-error").textContent =
        err instanceof ApiError ? err.detail : String(err);
    }
    render();
  });

  $("start").addEventListener("click", async () => {
    if (!vm.system) return;
    const x0 = ($("x0") as HTMLSelectElement).value;
    const x1 = ($("x1") as HTMLSelectElement).value;
    const role = ($("role") as HTMLSelectElement).value as Role;
    const resp = await client.createGame(vm.system.sessionId, x0, x1, role);
    vm = applyGameResponse({ ...vm, history: [] }, resp, null);
    render();
  });

  for (const id of ["x0", "x1"]) {
    $(id).addEventListener("change", render);
  }

  $("app").addEventListener("click", (ev) => {
    const el = ev.target as HTMLElement;
    if (el.matches("input[data-pick]")) {
      vm = toggleSelection(vm, el.getAttribute("data-pick")!);
      render();
    } else if (el.matches("button[data-submit]")) {
      const move = moveFromSelection(vm);
      if (move) void submit(move);
    } else if (el.matches(".hints button") && vm.game) {
      const state = el.getAttribute("data-state")!;
      const ellAttr = el.getAttribute("data-ell");
      const hint = ellAttr === null ? state : { ell: Number(ellAttr), state };
      void submit(moveFromHint(hint));
    }
  });

  $("app").addEventListener("change", (ev) => {
    const el = ev.target as HTMLElement;
    if (el.matches("select[data-j]")) {
      vm = { ...vm, selectedJ: Number((el as HTMLSelectElement).value) };
    }
  });
}

wire();
render();
