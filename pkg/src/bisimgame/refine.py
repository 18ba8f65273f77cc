"""Partition refinement: the greatest fixpoint and the spoiler's strategy table.

The refinement splits with respect to a single equivalence class at a time
and records, per ordered pair of separated states, the first separating
round and the witnessing (state, class) move.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

from .coalgebra import Coalgebra, CoalgebraError, State, functor_of, observe, successors, validate

INF = math.inf


@dataclass(frozen=True)
class Partition:
    """A partition of the state set; blocks are ordered by least member."""

    blocks: tuple  # of frozenset

    @classmethod
    def of(cls, groups: Iterable[Iterable[State]]) -> "Partition":
        blocks = sorted((frozenset(g) for g in groups), key=lambda b: min(b))
        return cls(tuple(blocks))

    @classmethod
    def trivial(cls, c: Coalgebra) -> "Partition":
        return cls.of([c.states]) if c.states else cls(())

    def block_of(self, x: State) -> frozenset:
        for b in self.blocks:
            if x in b:
                return b
        raise CoalgebraError(f"state {x!r} not covered by partition")

    def same_block(self, x: State, y: State) -> bool:
        return self.block_of(x) is self.block_of(y)

    def __str__(self) -> str:
        return " ".join("{" + ",".join(sorted(b)) + "}" for b in self.blocks)


@dataclass(frozen=True)
class StrategyTable:
    """Separation rounds and spoiler moves computed during refinement.

    seps maps an unordered pair (as a sorted 2-tuple) to its separation
    round; moves maps an ordered pair to the (state, block) the spoiler
    plays from that position.  rounds[i] is the partition after round i.
    """

    seps: Mapping
    moves: Mapping
    rounds: tuple  # of Partition

    def index(self, x0: State, x1: State):
        """First round at which the pair was separated; inf if bisimilar."""
        if x0 == x1:
            return INF
        return self.seps.get((min(x0, x1), max(x0, x1)), INF)

    def move(self, x0: State, x1: State):
        """The (state, block) recorded for the ordered pair, or None."""
        return self.moves.get((x0, x1))


def f_alpha_step(c: Coalgebra, r: Partition) -> Partition:
    """One refinement step: split pairs that differ on some class of r."""
    sig = {}
    for x in c.states:
        key = (r.block_of(x),
               tuple(observe(c, x, blk) for blk in r.blocks))
        sig.setdefault(key, []).append(x)
    return Partition.of(sig.values())


def _splitter_order(c: Coalgebra, r: Partition, x0: State, x1: State) -> list:
    """Scan order for candidate classes when separating the pair (x0, x1).

    Classes contained in the pair's one-step successor set come first;
    within each group, classes by least member.  This keeps the recorded
    spoiler moves on reachable states whenever possible.
    """
    reach = successors(c, x0) | successors(c, x1)
    return sorted(r.blocks, key=lambda b: (not b <= reach, min(b)))


def refine(c: Coalgebra) -> tuple:
    """Run the refinement to its greatest fixpoint.

    Returns (partition, strategy).  Raises CoalgebraError when the system
    fails validation.
    """
    problems = validate(c)
    if problems:
        raise CoalgebraError("invalid system: " + "; ".join(problems))
    ops = functor_of(c)

    seps: dict = {}
    moves: dict = {}
    rounds = [Partition.trivial(c)]
    current = rounds[0]
    i = 0
    while True:
        i += 1
        prev = current
        obs_cache = {x: {blk: observe(c, x, blk) for blk in prev.blocks}
                     for x in c.states}
        # Record strategy entries for pairs split this round.
        pairs = [(x0, x1) for bi, x0 in enumerate(c.states)
                 for x1 in c.states[bi + 1:]
                 if prev.same_block(x0, x1)]
        for x0, x1 in pairs:
            for blk in _splitter_order(c, prev, x0, x1):
                v0 = obs_cache[x0][blk]
                v1 = obs_cache[x1][blk]
                if v0 == v1:
                    continue
                seps[(x0, x1)] = i
                le01 = ops.leq(v0, v1)
                le10 = ops.leq(v1, v0)
                # Ordered-pair convention: check the first component's
                # direction first; an incomparable tie points at it.
                moves[(x0, x1)] = (x0, blk) if not le01 else (x1, blk)
                moves[(x1, x0)] = (x1, blk) if not le10 else (x0, blk)
                break
        current = f_alpha_step(c, prev)
        if current == prev:
            break
        rounds.append(current)
    return current, StrategyTable(seps, moves, tuple(rounds))
