"""The bisimulation game: both players' strategies and a move-by-move referee.

A round has four steps: the spoiler names a side and a predicate, the
duplicator answers with a predicate that dominates it in the lifted order,
the spoiler picks a state from one predicate, the duplicator picks one from
the other.  The referee enforces legality; infinite play is cut off by
position repetition or a round cap, both counted as duplicator wins.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional

from .coalgebra import Coalgebra, CoalgebraError, State, functor_of, observe, successors
from .refine import INF, Partition, StrategyTable


class GameError(CoalgebraError):
    """Raised for moves that are illegal or out of turn."""


class Phase(str, Enum):
    STEP1 = "step1"
    STEP2 = "step2"
    STEP3 = "step3"
    STEP4 = "step4"
    SPOILER_WON = "spoiler_won"
    DUPLICATOR_WON = "duplicator_won"


SPOILER_PHASES = (Phase.STEP1, Phase.STEP3)
DUPLICATOR_PHASES = (Phase.STEP2, Phase.STEP4)


@dataclass(frozen=True)
class Step1Move:
    j: int
    predicate: frozenset


@dataclass(frozen=True)
class Step2Move:
    predicate: frozenset


@dataclass(frozen=True)
class Step3Move:
    ell: int
    state: State


@dataclass(frozen=True)
class Step4Move:
    state: State


_MOVE_PHASE = {Step1Move: Phase.STEP1, Step2Move: Phase.STEP2,
               Step3Move: Phase.STEP3, Step4Move: Phase.STEP4}


@dataclass(frozen=True)
class GameState:
    """The referee's record of a live game."""

    position: tuple
    phase: Phase
    round: int
    cap: int
    history: tuple
    j: Optional[int] = None
    p0: Optional[frozenset] = None
    p1: Optional[frozenset] = None
    ell: Optional[int] = None
    pick: Optional[State] = None

    def predicate(self, idx: int) -> Optional[frozenset]:
        return self.p0 if idx == 0 else self.p1

    @property
    def over(self) -> bool:
        return self.phase in (Phase.SPOILER_WON, Phase.DUPLICATOR_WON)


def new_game(c: Coalgebra, x0: State, x1: State, cap: Optional[int] = None) -> GameState:
    for x in (x0, x1):
        if x not in c.transitions:
            raise CoalgebraError(f"unknown state {x!r}")
    if cap is None:
        cap = 2 * len(c.states) ** 2
    return GameState(position=(x0, x1), phase=Phase.STEP1, round=1,
                     cap=cap, history=((x0, x1),))


# ---------------------------------------------------------------------------
# Strategies
# ---------------------------------------------------------------------------

def validate_step2(c: Coalgebra, x_j: State, x_other: State,
                   p_j: frozenset, p_other: frozenset) -> bool:
    """The duplicator's legality condition for an answering predicate."""
    ops = functor_of(c)
    return ops.leq(observe(c, x_j, p_j), observe(c, x_other, p_other))


def spoiler_move(st: StrategyTable, pos: tuple) -> tuple:
    """The spoiler's opening move from a non-bisimilar position: (j, p_j)."""
    if st.index(*pos) == INF:
        raise GameError("states bisimilar - no spoiler strategy")
    s, block = st.move(*pos)
    j = 0 if s == pos[0] else 1
    return j, frozenset(block)


def spoiler_pick(c: Coalgebra, st: StrategyTable, pos: tuple,
                 p_j: frozenset, p_other: frozenset) -> tuple:
    """The spoiler's Step-3 choice: (1-j, x') with x' in the duplicator's
    predicate such that the separation index drops against every reply."""
    i = st.index(*pos)
    s, _ = st.move(*pos)
    j = 0 if s == pos[0] else 1
    bound = i if p_j else INF  # empty p_j: any member of p_other works
    for x in sorted(p_other):
        if all(st.index(y, x) < bound for y in p_j):
            return 1 - j, x
    raise GameError("no index-decreasing pick exists; duplicator's reply "
                    "was not a legal Step-2 answer")


def duplicator_predicate(part: Partition, p_j: frozenset) -> frozenset:
    """Kernel closure of the spoiler's predicate: union of touched blocks."""
    out = set()
    for b in part.blocks:
        if b & p_j:
            out |= b
    return frozenset(out)


def duplicator_pick(part: Partition, picked: State, p_other: frozenset) -> State:
    """The duplicator's Step-4 answer: a block-mate of the spoiler's pick."""
    if not p_other:
        raise GameError("no state available - duplicator loses")
    mates = sorted(p_other & part.block_of(picked))
    if mates:
        return mates[0]
    return min(p_other)


# ---------------------------------------------------------------------------
# Referee
# ---------------------------------------------------------------------------

def _has_step2_reply(c: Coalgebra, x_j: State, x_other: State,
                     p_j: frozenset) -> bool:
    """Whether any answering predicate satisfies the Step-2 condition.

    The observation of x_other only depends on the predicate's restriction
    to its successors, so searching those subsets is exhaustive.
    """
    v_j = observe(c, x_j, p_j)
    ops = functor_of(c)
    relevant = sorted(successors(c, x_other))
    for k in range(len(relevant) + 1):
        for combo in itertools.combinations(relevant, k):
            if ops.leq(v_j, observe(c, x_other, frozenset(combo))):
                return True
    return False


def _finish_round(c: Coalgebra, g: GameState, new_pos: tuple) -> GameState:
    if new_pos in g.history:
        return replace(g, position=new_pos, phase=Phase.DUPLICATOR_WON,
                       history=g.history + (new_pos,))
    if g.round + 1 > g.cap:
        return replace(g, position=new_pos, phase=Phase.DUPLICATOR_WON,
                       history=g.history + (new_pos,))
    return GameState(position=new_pos, phase=Phase.STEP1, round=g.round + 1,
                     cap=g.cap, history=g.history + (new_pos,))


def advance(c: Coalgebra, g: GameState, move) -> GameState:
    """Apply one move, enforcing legality, and resolve forced outcomes."""
    if g.over:
        raise GameError("game is over")
    expected = _MOVE_PHASE.get(type(move))
    if expected is None:
        raise GameError(f"unknown move type {type(move).__name__}")
    if expected is not g.phase:
        raise GameError(f"out-of-turn move: game is at {g.phase.value}, "
                        f"move belongs to {expected.value}")
    states = set(c.states)

    if g.phase is Phase.STEP1:
        if move.j not in (0, 1):
            raise GameError("Step 1 index j must be 0 or 1")
        if not move.predicate <= states:
            raise GameError("Step 1 predicate mentions unknown states")
        g = replace(g, phase=Phase.STEP2, j=move.j,
                    p0=move.predicate if move.j == 0 else None,
                    p1=move.predicate if move.j == 1 else None)
        x_j = g.position[move.j]
        x_other = g.position[1 - move.j]
        if not _has_step2_reply(c, x_j, x_other, move.predicate):
            return replace(g, phase=Phase.SPOILER_WON)
        return g

    if g.phase is Phase.STEP2:
        if not move.predicate <= states:
            raise GameError("Step 2 predicate mentions unknown states")
        x_j = g.position[g.j]
        x_other = g.position[1 - g.j]
        p_j = g.predicate(g.j)
        if not validate_step2(c, x_j, x_other, p_j, move.predicate):
            raise GameError("Step 2 condition Fp_j(alpha(x_j)) <=F "
                            "Fp_{1-j}(alpha(x_{1-j})) fails")
        g = replace(g, phase=Phase.STEP3,
                    p0=move.predicate if g.j == 1 else g.p0,
                    p1=move.predicate if g.j == 0 else g.p1)
        if not g.p0 and not g.p1:
            return replace(g, phase=Phase.DUPLICATOR_WON)
        return g

    if g.phase is Phase.STEP3:
        if move.ell not in (0, 1):
            raise GameError("Step 3 index must be 0 or 1")
        if move.state not in (g.predicate(move.ell) or frozenset()):
            raise GameError("Step 3 pick must satisfy the chosen predicate")
        g = replace(g, phase=Phase.STEP4, ell=move.ell, pick=move.state)
        if not g.predicate(1 - move.ell):
            return replace(g, phase=Phase.SPOILER_WON)
        return g

    # Phase.STEP4
    if move.state not in g.predicate(1 - g.ell):
        raise GameError("Step 4 pick must satisfy the other predicate")
    new_pos = (g.pick, move.state) if g.ell == 0 else (move.state, g.pick)
    return _finish_round(c, g, new_pos)


# ---------------------------------------------------------------------------
# Engine player
# ---------------------------------------------------------------------------

def engine_move(c: Coalgebra, part: Partition, st: StrategyTable, g: GameState):
    """The computer's move in the current phase.

    Follows the winning strategy when one exists; otherwise falls back to
    deterministic legal moves (a spoiler without a strategy still has to
    play something).
    """
    if g.phase is Phase.STEP1:
        if st.index(*g.position) < INF:
            j, pred = spoiler_move(st, g.position)
            return Step1Move(j, pred)
        return Step1Move(0, frozenset(c.states))
    if g.phase is Phase.STEP2:
        p_j = g.predicate(g.j)
        reply = duplicator_predicate(part, p_j)
        x_j = g.position[g.j]
        x_other = g.position[1 - g.j]
        if validate_step2(c, x_j, x_other, p_j, reply):
            return Step2Move(reply)
        # Off the winning path: answer with any legal predicate.
        relevant = sorted(successors(c, x_other))
        for k in range(len(relevant) + 1):
            for combo in itertools.combinations(relevant, k):
                cand = frozenset(combo)
                if validate_step2(c, x_j, x_other, p_j, cand):
                    return Step2Move(cand)
        raise GameError("engine duplicator has no legal reply")
    if g.phase is Phase.STEP3:
        if st.index(*g.position) < INF:
            s, _ = st.move(*g.position)
            j = 0 if s == g.position[0] else 1
            if g.j == j and g.predicate(1 - j):
                try:
                    ell, x = spoiler_pick(c, st, g.position,
                                          g.predicate(j), g.predicate(1 - j))
                    return Step3Move(ell, x)
                except GameError:
                    pass
        for ell in ((1 - g.j, g.j) if g.j is not None else (0, 1)):
            pred = g.predicate(ell)
            if pred:
                return Step3Move(ell, min(pred))
        raise GameError("no Step-3 pick available")
    if g.phase is Phase.STEP4:
        return Step4Move(duplicator_pick(part, g.pick, g.predicate(1 - g.ell)))
    raise GameError("game is over")
