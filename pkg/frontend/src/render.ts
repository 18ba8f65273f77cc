/** HTML/SVG string rendering of the view-model.  Pure functions of the
 *  model, so a transcript always renders the same markup. */

import type { GameStateJson, Step3Hint, SystemInfo } from "./api.js";
import { layoutGraph } from "./layout.js";
import { turnColor, type ViewModel } from "./model.js";

export function escapeHtml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

const NODE_R = 18;

export function renderGraph(
  system: SystemInfo,
  highlight: readonly string[] = [],
): string {
  const layout = layoutGraph(system);
  const pos = new Map(layout.nodes.map((n) => [n.id, n]));
  const parts: string[] = [];
  parts.push(
    `<svg class="graph" viewBox="0 0 ${layout.width} ${layout.height}" ` +
      `xmlns="http://www.w3.org/2000/svg">`,
    `<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" ` +
      `markerWidth="7" markerHeight="7" orient="auto-start-reverse">` +
      `<path d="M 0 0 L 10 5 L 0 10 z"/></marker></defs>`,
  );
  for (const e of layout.edges) {
    const a = pos.get(e.src)!;
    const b = pos.get(e.dst)!;
    const label = escapeHtml(e.label);
    if (e.src === e.dst) {
      const x = a.x;
      const y = a.y - NODE_R;
      parts.push(
        `<path class="edge" d="M ${x - 8} ${y} C ${x - 24} ${y - 36}, ` +
          `${x + 24} ${y - 36}, ${x + 8} ${y}" marker-end="url(#arrow)"/>`,
        `<text class="edge-label" x="${x}" y="${y - 30}">${label}</text>`,
      );
      continue;
    }
    const dx = b.x - a.x;
    const dy = b.y - a.y;
    const len = Math.hypot(dx, dy) || 1;
    const sx = a.x + (dx / len) * NODE_R;
    const sy = a.y + (dy / len) * NODE_R;
    const tx = b.x - (dx / len) * NODE_R;
    const ty = b.y - (dy / len) * NODE_R;
    // bend parallel edges apart
    const bend = (e.lane + 1) * 14 * (e.lane % 2 === 0 ? 1 : -1);
    const mx = (sx + tx) / 2 - (dy / len) * bend;
    const my = (sy + ty) / 2 + (dx / len) * bend;
    parts.push(
      `<path class="edge" d="M ${sx} ${sy} Q ${mx} ${my} ${tx} ${ty}" ` +
        `marker-end="url(#arrow)"/>`,
      `<text class="edge-label" x="${mx}" y="${my - 4}">${label}</text>`,
    );
  }
  for (const n of layout.nodes) {
    const cls = highlight.includes(n.id) ? "node current" : "node";
    parts.push(
      `<g class="${cls}" data-state="${escapeHtml(n.id)}">` +
        `<circle cx="${n.x}" cy="${n.y}" r="${NODE_R}"/>` +
        `<text x="${n.x}" y="${n.y + 5}">${escapeHtml(n.id)}</text></g>`,
    );
  }
  parts.push("</svg>");
  return parts.join("");
}

export function renderVerdicts(system: SystemInfo): string {
  const rows = system.verdicts
    .map(
      (v) =>
        `<tr data-x0="${escapeHtml(v.x0)}" data-x1="${escapeHtml(v.x1)}">` +
        `<td>${escapeHtml(v.x0)}</td><td>${escapeHtml(v.x1)}</td>` +
        `<td>${v.bisimilar ? "bisimilar" : `separated at round ${v.separationRound}`}</td>` +
        `</tr>`,
    )
    .join("");
  return `<table class="verdicts"><thead><tr><th>x0</th><th>x1</th><th>verdict</th></tr></thead><tbody>${rows}</tbody></table>`;
}

function renderPredicate(name: string, p: string[] | null): string {
  if (p === null) return "";
  return `<div class="predicate">${name} = {${p.map(escapeHtml).join(", ")}}</div>`;
}

export function renderPicker(vm: ViewModel): string {
  const system = vm.system!;
  const boxes = system.states
    .map((s) => {
      const checked = vm.selection.includes(s) ? " checked" : "";
      return (
        `<label><input type="checkbox" data-pick="${escapeHtml(s)}"${checked}>` +
        `${escapeHtml(s)}</label>`
      );
    })
    .join("");
  const jPicker =
    vm.game?.state.phase === "step1"
      ? `<label>j <select data-j>` +
        [0, 1]
          .map(
            (j) =>
              `<option value="${j}"${j === vm.selectedJ ? " selected" : ""}>${j}</option>`,
          )
          .join("") +
        `</select></label>`
      : "";
  return (
    `<div class="picker">${jPicker}${boxes}` +
    `<button data-submit>submit predicate</button></div>`
  );
}

export function renderHints(state: GameStateJson): string {
  if (state.phase === "step3") {
    const hints = state.legalHints as Step3Hint[];
    const buttons = hints
      .map(
        (h) =>
          `<button data-ell="${h.ell}" data-state="${escapeHtml(h.state)}">` +
          `side ${h.ell}: ${escapeHtml(h.state)}</button>`,
      )
      .join("");
    return `<div class="hints">pick a state from either predicate: ${buttons}</div>`;
  }
  if (state.phase === "step4") {
    const hints = state.legalHints as string[];
    const buttons = hints
      .map(
        (s) =>
          `<button data-state="${escapeHtml(s)}">${escapeHtml(s)}</button>`,
      )
      .join("");
    return `<div class="hints">answer with a state from the other predicate: ${buttons}</div>`;
  }
  return "";
}

export function renderGamePanel(vm: ViewModel): string {
  const game = vm.game;
  if (!game) return `<div class="game-panel empty">no game in progress</div>`;
  const state = game.state;
  const color = turnColor(state);
  const parts: string[] = [`<div class="game-panel">`];
  parts.push(
    `<div class="position">position (${escapeHtml(state.position[0])}, ` +
      `${escapeHtml(state.position[1])}), round ${state.round}</div>`,
  );
  if (color) {
    parts.push(
      `<div class="turn" style="background:${color}">` +
        `${state.turn}'s turn — ${escapeHtml(state.phase)}</div>`,
    );
  }
  parts.push(renderPredicate("p0", state.pendingPredicates.p0));
  parts.push(renderPredicate("p1", state.pendingPredicates.p1));
  if (vm.error) {
    parts.push(`<div class="error">${escapeHtml(vm.error)}</div>`);
  }
  if (state.turn === state.humanRole && !state.winner) {
    if (state.phase === "step1" || state.phase === "step2") {
      parts.push(renderPicker(vm));
    } else {
      parts.push(renderHints(state));
    }
  }
  if (game.winner) {
    parts.push(`<div class="winner">${game.winner} wins</div>`);
    if (game.formula) {
      parts.push(
        `<div class="formula">distinguishing formula: ` +
          `<code>${escapeHtml(game.formula)}</code></div>`,
      );
    }
  }
  parts.push(
    `<ol class="history">` +
      vm.history.map((h) => `<li>${escapeHtml(h)}</li>`).join("") +
      `</ol>`,
  );
  parts.push(`</div>`);
  return parts.join("");
}

export function renderApp(vm: ViewModel): string {
  if (!vm.system) {
    return `<div class="upload">paste a system CSV and load it</div>`;
  }
  const highlight = vm.game ? vm.game.state.position : [];
  return (
    renderGraph(vm.system, highlight) +
    renderVerdicts(vm.system) +
    renderGamePanel(vm)
  );
}
