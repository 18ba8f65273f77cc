"""Finite coalgebras, observations in F2 and the lifted order.

Two branching types are built in: finitely branching labelled transition
systems ("lts") and probabilistic transition systems with termination
("pts").  A new branching type plugs in by subclassing FunctorOps and
registering it; everything downstream (refinement, games, formulas) only
talks to that seam.
"""
from __future__ import annotations

import abc
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

State = str
Label = str

LTS = "lts"
PTS = "pts"


class CoalgebraError(ValueError):
    """Raised for malformed systems, unknown states or mismatched observations."""


# ---------------------------------------------------------------------------
# Observations (elements of F2)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LtsObs:
    """An element of P_f(A x 2): the set of (label, bit) pairs seen from a state."""

    pairs: frozenset

    def __str__(self) -> str:
        inner = ",".join(f"({a},{b})" for a, b in sorted(self.pairs))
        return "{" + inner + "}"


@dataclass(frozen=True)
class ProbObs:
    """An element of ([0,1]+1)^A: per label, mass inside the predicate or termination.

    Entries are (label, value) with value a Fraction or None for termination,
    sorted by label, one entry per alphabet letter.
    """

    entries: tuple

    def value(self, label: Label):
        for a, v in self.entries:
            if a == label:
                return v
        raise CoalgebraError(f"label {label!r} not in observation")

    @property
    def labels(self) -> tuple:
        return tuple(a for a, _ in self.entries)

    def __str__(self) -> str:
        def fmt(v):
            if v is None:
                return "*"
            if v.denominator == 1:
                return str(v.numerator)
            return f"{v.numerator}/{v.denominator}"

        inner = ", ".join(f"{a}:{fmt(v)}" for a, v in self.entries)
        return "<" + inner + ">"


def format_observation(v) -> str:
    return str(v)


def parse_observation(text: str):
    """Parse the printed form of an observation (round-trips with str)."""
    s = text.strip()
    if s.startswith("{"):
        if not s.endswith("}"):
            raise CoalgebraError(f"bad observation {text!r}")
        body = s[1:-1].strip()
        pairs = set()
        while body:
            if not body.startswith("("):
                raise CoalgebraError(f"bad observation {text!r}")
            end = body.index(")")
            a, b = body[1:end].split(",")
            pairs.add((a.strip(), int(b)))
            body = body[end + 1:].lstrip(", ").strip()
        return LtsObs(frozenset(pairs))
    if s.startswith("<"):
        if not s.endswith(">"):
            raise CoalgebraError(f"bad observation {text!r}")
        body = s[1:-1].strip()
        entries = []
        if body:
            for part in body.split(","):
                a, _, val = part.partition(":")
                val = val.strip()
                entries.append((a.strip(), None if val == "*" else Fraction(val)))
        return ProbObs(tuple(sorted(entries)))
    raise CoalgebraError(f"bad observation {text!r}")


# ---------------------------------------------------------------------------
# Coalgebras
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Coalgebra:
    """A finite coalgebra alpha: X -> FX over one of the registered functors.

    transitions:
      lts: state -> frozenset of (label, successor)
      pts: state -> {label: None | {successor: Fraction}}  (None = termination)
    """

    kind: str
    states: tuple
    alphabet: tuple
    transitions: Mapping

    @classmethod
    def lts(cls, states: Iterable[State], alphabet: Iterable[Label],
            edges: Iterable[tuple]) -> "Coalgebra":
        """Build an LTS coalgebra from (src, label, dst) triples."""
        sts = tuple(sorted(set(states)))
        trans: dict = {x: set() for x in sts}
        for src, a, dst in edges:
            trans.setdefault(src, set()).add((a, dst))
        frozen = {x: frozenset(v) for x, v in trans.items()}
        return cls(LTS, sts, tuple(sorted(set(alphabet))), frozen)

    @classmethod
    def pts(cls, states: Iterable[State], alphabet: Iterable[Label],
            rows: Mapping) -> "Coalgebra":
        """Build a probabilistic coalgebra.

        rows maps (state, label) -> dict of successor weights; absent keys
        mean termination for that label.
        """
        sts = tuple(sorted(set(states)))
        alph = tuple(sorted(set(alphabet)))
        trans = {}
        for x in sts:
            row = {}
            for a in alph:
                dist = rows.get((x, a))
                row[a] = None if dist is None else {y: Fraction(w) for y, w in dist.items()}
            trans[x] = row
        return cls(PTS, sts, alph, trans)


def functor_of(c: Coalgebra) -> "FunctorOps":
    try:
        return FUNCTORS[c.kind]
    except KeyError:
        raise CoalgebraError(f"unknown functor kind {c.kind!r}") from None


def validate(c: Coalgebra) -> list:
    """Return all invariant violations of the system; empty list means ok."""
    return functor_of(c).validate(c)


def observe(c: Coalgebra, x: State, members: Iterable[State]):
    """Compute Fp(alpha(x)) for the predicate with the given member set."""
    if x not in c.transitions:
        raise CoalgebraError(f"unknown state {x!r}")
    return functor_of(c).observe(c, x, frozenset(members))


def leq(v0, v1) -> bool:
    """Decide the lifted order on F2 between two observations."""
    if isinstance(v0, LtsObs) and isinstance(v1, LtsObs):
        return FUNCTORS[LTS].leq(v0, v1)
    if isinstance(v0, ProbObs) and isinstance(v1, ProbObs):
        return FUNCTORS[PTS].leq(v0, v1)
    raise CoalgebraError("observations from different functors")


def enumerate_f2(c: Coalgebra) -> list:
    """All elements of F2 over the system's alphabet, deterministically ordered."""
    return functor_of(c).enumerate_f2(c.alphabet)


def successors(c: Coalgebra, x: State) -> frozenset:
    """States reachable from x in one step (support states for pts)."""
    return functor_of(c).successors(c, x)


# ---------------------------------------------------------------------------
# Functor seam
# ---------------------------------------------------------------------------

class FunctorOps(abc.ABC):
    """What a branching type must provide to participate in the algorithms."""

    kind: str

    @abc.abstractmethod
    def validate(self, c: Coalgebra) -> list: ...

    @abc.abstractmethod
    def observe(self, c: Coalgebra, x: State, members: frozenset): ...

    @abc.abstractmethod
    def leq(self, v0, v1) -> bool: ...

    @abc.abstractmethod
    def successors(self, c: Coalgebra, x: State) -> frozenset: ...

    def enumerate_f2(self, alphabet: tuple) -> list:
        raise CoalgebraError("F2 infinite")


class LtsOps(FunctorOps):
    kind = LTS

    def validate(self, c: Coalgebra) -> list:
        problems = []
        states = set(c.states)
        alphabet = set(c.alphabet)
        for x in c.states:
            for a, y in sorted(c.transitions.get(x, ())):
                if y not in states:
                    problems.append(f"dangling state {y!r} in transition {x!r} -{a}-> {y!r}")
                if a not in alphabet:
                    problems.append(f"unknown label {a!r} in transition from {x!r}")
        for x in c.transitions:
            if x not in states:
                problems.append(f"transition source {x!r} not a declared state")
        return problems

    def observe(self, c, x, members):
        return LtsObs(frozenset((a, 1 if y in members else 0)
                                for a, y in c.transitions[x]))

    def leq(self, v0: LtsObs, v1: LtsObs) -> bool:
        # Egli-Milner lifting of 0 <= 1 with labels matched exactly.
        for a, b0 in v0.pairs:
            if not any(a2 == a and b0 <= b1 for a2, b1 in v1.pairs):
                return False
        for a, b1 in v1.pairs:
            if not any(a2 == a and b0 <= b1 for a2, b0 in v0.pairs):
                return False
        return True

    def successors(self, c, x):
        return frozenset(y for _, y in c.transitions[x])

    def enumerate_f2(self, alphabet):
        pairs = [(a, b) for a in sorted(alphabet) for b in (0, 1)]
        out = []
        for mask in range(1 << len(pairs)):
            out.append(LtsObs(frozenset(p for i, p in enumerate(pairs)
                                        if mask >> i & 1)))
        return out


class ProbOps(FunctorOps):
    kind = PTS

    def validate(self, c: Coalgebra) -> list:
        problems = []
        states = set(c.states)
        for x in c.states:
            row = c.transitions.get(x, {})
            for a in c.alphabet:
                dist = row.get(a)
                if dist is None:
                    continue
                total = Fraction(0)
                for y, w in sorted(dist.items()):
                    if y not in states:
                        problems.append(f"dangling state {y!r} in distribution of ({x!r},{a!r})")
                    if w < 0 or w > 1:
                        problems.append(f"weight {w} of ({x!r},{a!r},{y!r}) outside [0,1]")
                    total += w
                if total != 1:
                    problems.append(f"distribution of ({x!r},{a!r}) sums to {total}, not 1")
        return problems

    def observe(self, c, x, members):
        entries = []
        for a in c.alphabet:
            dist = c.transitions[x][a]
            if dist is None:
                entries.append((a, None))
            else:
                entries.append((a, sum((w for y, w in dist.items() if y in members),
                                       Fraction(0))))
        return ProbObs(tuple(entries))

    def leq(self, v0: ProbObs, v1: ProbObs) -> bool:
        if v0.labels != v1.labels:
            raise CoalgebraError("alphabet mismatch between observations")
        for (a, u), (_, w) in zip(v0.entries, v1.entries):
            if (u is None) != (w is None):
                return False
            if u is not None and u > w:
                return False
        return True

    def successors(self, c, x):
        out = set()
        for a in c.alphabet:
            dist = c.transitions[x][a]
            if dist:
                out.update(y for y, w in dist.items() if w > 0)
        return frozenset(out)


FUNCTORS: dict = {}


def register_functor(ops: FunctorOps) -> None:
    FUNCTORS[ops.kind] = ops


register_functor(LtsOps())
register_functor(ProbOps())
