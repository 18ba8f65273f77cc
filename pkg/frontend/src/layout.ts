/** Deterministic layered graph layout.
 *
 *  Nodes are assigned to layers by shortest edge distance from the roots
 *  (states with no incoming transition, falling back to the first state),
 *  and ordered within a layer by their position in the system's state list,
 *  so the same system always renders the same picture. */

import type { SystemInfo, Transition } from "./api.js";

export interface NodePos {
  id: string;
  x: number;
  y: number;
  layer: number;
}

export interface EdgeView {
  src: string;
  dst: string;
  /** "a" for lts, "a, 4/5" for pts */
  label: string;
  /** parallel-edge index for curvature */
  lane: number;
}

export interface GraphLayout {
  nodes: NodePos[];
  edges: EdgeView[];
  width: number;
  height: number;
}

const X_GAP = 120;
const Y_GAP = 80;
const MARGIN = 60;

function edgeLabel(t: Transition): string {
  return t.weight === undefined ? t.label : `${t.label}, ${t.weight}`;
}

export function layoutGraph(system: SystemInfo): GraphLayout {
  const order = new Map(system.states.map((s, i) => [s, i]));
  const targets = new Set(
    system.transitions.filter((t) => t.dst !== undefined).map((t) => t.dst!),
  );
  let roots = system.states.filter((s) => !targets.has(s));
  if (roots.length === 0) roots = system.states.slice(0, 1);

  const layerOf = new Map<string, number>();
  let frontier = roots;
  roots.forEach((s) => layerOf.set(s, 0));
  let depth = 0;
  while (frontier.length > 0) {
    depth += 1;
    const next: string[] = [];
    for (const t of system.transitions) {
      if (
        t.dst !== undefined &&
        frontier.includes(t.src) &&
        !layerOf.has(t.dst)
      ) {
        layerOf.set(t.dst, depth);
        next.push(t.dst);
      }
    }
    frontier = next;
  }
  // unreachable states go to a final layer of their own
  for (const s of system.states) {
    if (!layerOf.has(s)) layerOf.set(s, depth + 1);
  }

  const layers = new Map<number, string[]>();
  for (const s of system.states) {
    const l = layerOf.get(s)!;
    if (!layers.has(l)) layers.set(l, []);
    layers.get(l)!.push(s);
  }
  const nodes: NodePos[] = [];
  let maxRow = 0;
  for (const [l, members] of [...layers.entries()].sort((a, b) => a[0] - b[0])) {
    members.sort((a, b) => order.get(a)! - order.get(b)!);
    members.forEach((s, row) => {
      nodes.push({ id: s, layer: l, x: MARGIN + l * X_GAP, y: MARGIN + row * Y_GAP });
      maxRow = Math.max(maxRow, row);
    });
  }
  nodes.sort((a, b) => order.get(a.id)! - order.get(b.id)!);

  const laneCount = new Map<string, number>();
  const edges: EdgeView[] = [];
  for (const t of system.transitions) {
    if (t.dst === undefined) continue; // pts termination: no arrow drawn
    const key = `${t.src}->${t.dst}`;
    const lane = laneCount.get(key) ?? 0;
    laneCount.set(key, lane + 1);
    edges.push({ src: t.src, dst: t.dst, label: edgeLabel(t), lane });
  }

  const maxLayer = Math.max(...nodes.map((n) => n.layer));
  return {
    nodes,
    edges,
    width: 2 * MARGIN + maxLayer * X_GAP,
    height: 2 * MARGIN + maxRow * Y_GAP,
  };
}
