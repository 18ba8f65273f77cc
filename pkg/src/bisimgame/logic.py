"""Modal formulas over coalgebras: syntax, semantics, synthesis and recoding.

Modalities are evaluation maps F2 -> 2.  The central one is the cone
modality [^v], true exactly on observations above v in the lifted order.
Distinguishing formulas for non-bisimilar state pairs are built from the
refinement strategy table and can be recoded into box/diamond modalities
(finite F2) or threshold/termination modalities (probabilistic systems).

Concrete grammar (whitespace between tokens is insignificant):

    tt | ff | !(phi) | (phi & phi & ...) | (phi | phi | ...)
    | [^v]phi | [box a]phi | [dia a]phi | [a>=q]phi | [a=*]phi

where v is a printed observation and q a nonnegative rational.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .coalgebra import (Coalgebra, CoalgebraError, Label, LtsObs, ProbObs,
                        State, enumerate_f2, leq, observe,
                        parse_observation, successors)
from .refine import INF, Partition, StrategyTable


# ---------------------------------------------------------------------------
# Modalities
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Cone:
    """[^v]: true on observations above v in the lifted order."""

    v: object  # LtsObs or ProbObs

    def __str__(self) -> str:
        return f"^{self.v}"


@dataclass(frozen=True)
class Box:
    """[box a]: true when no a-successor falls outside the predicate."""

    label: Label

    def __str__(self) -> str:
        return f"box {self.label}"


@dataclass(frozen=True)
class Dia:
    """[dia a]: true when some a-successor satisfies the predicate."""

    label: Label

    def __str__(self) -> str:
        return f"dia {self.label}"


@dataclass(frozen=True)
class AtLeast:
    """[a>=q]: true when the a-component is a probability of at least q."""

    label: Label
    q: Fraction

    def __str__(self) -> str:
        return f"{self.label}>={self.q}"


@dataclass(frozen=True)
class IsTerminate:
    """[a=*]: true when the a-component is termination."""

    label: Label

    def __str__(self) -> str:
        return f"{self.label}=*"


PRE_ID = "id"
PRE_ONE = "one"
PRE_ZERO = "zero"
PRE_NEG = "neg"
_PRES = (PRE_ID, PRE_ONE, PRE_ZERO, PRE_NEG)


@dataclass(frozen=True)
class Closed:
    """base composed with the functor image of a bit map (id/one/zero/neg).

    Printing uses the identities [base.Fone]phi = [base]tt,
    [base.Fzero]phi = [base]ff, [base.Fneg]phi = [base]!(phi), so these
    never appear verbatim in output.
    """

    base: object
    pre: str

    def __post_init__(self):
        if self.pre not in _PRES:
            raise CoalgebraError(f"unknown bit map {self.pre!r}")


def _apply_bitmap(v, pre: str):
    """The functor applied to a bit map, acting on an observation."""
    if pre == PRE_ID:
        return v
    if isinstance(v, LtsObs):
        if pre == PRE_ONE:
            return LtsObs(frozenset((a, 1) for a, _ in v.pairs))
        if pre == PRE_ZERO:
            return LtsObs(frozenset((a, 0) for a, _ in v.pairs))
        return LtsObs(frozenset((a, 1 - b) for a, b in v.pairs))
    if isinstance(v, ProbObs):
        def f(x):
            if x is None:
                return None
            if pre == PRE_ONE:
                return Fraction(1)
            if pre == PRE_ZERO:
                return Fraction(0)
            return 1 - x
        return ProbObs(tuple((a, f(x)) for a, x in v.entries))
    raise CoalgebraError(f"unknown observation type {type(v).__name__}")


def eval_modality(m, v) -> bool:
    """Apply an evaluation map F2 -> 2 to an observation."""
    if isinstance(m, Cone):
        return leq(m.v, v)
    if isinstance(m, Box):
        if not isinstance(v, LtsObs):
            raise CoalgebraError("box modality needs a finite-branching observation")
        return (m.label, 0) not in v.pairs
    if isinstance(m, Dia):
        if not isinstance(v, LtsObs):
            raise CoalgebraError("diamond modality needs a finite-branching observation")
        return (m.label, 1) in v.pairs
    if isinstance(m, AtLeast):
        x = v.value(m.label)
        return x is not None and x >= m.q
    if isinstance(m, IsTerminate):
        return v.value(m.label) is None
    if isinstance(m, Closed):
        return eval_modality(m.base, _apply_bitmap(v, m.pre))
    raise CoalgebraError(f"unknown modality {m!r}")


# ---------------------------------------------------------------------------
# Formulas
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Conj:
    items: tuple

    def __str__(self) -> str:
        if not self.items:
            return "tt"
        return "(" + " & ".join(str(f) for f in self.items) + ")"


@dataclass(frozen=True)
class Disj:
    items: tuple

    def __str__(self) -> str:
        if not self.items:
            return "ff"
        return "(" + " | ".join(str(f) for f in self.items) + ")"


@dataclass(frozen=True)
class Neg:
    body: object

    def __str__(self) -> str:
        return f"!({self.body})"


@dataclass(frozen=True)
class Modal:
    modality: object
    body: object

    def __str__(self) -> str:
        m, body = self.modality, self.body
        if isinstance(m, Closed):
            if m.pre == PRE_ONE:
                return str(Modal(m.base, TT))
            if m.pre == PRE_ZERO:
                return str(Modal(m.base, FF))
            if m.pre == PRE_NEG:
                return str(Modal(m.base, Neg(body)))
            m = m.base
        return f"[{m}]{body}"


# Formulas are shared DAGs; recoded formulas can have exponentially larger
# tree expansions, so hashes are cached per node instead of recomputed.
def _install_cached_hash(cls):
    def cached_hash(self):
        try:
            return object.__getattribute__(self, "_hash")
        except AttributeError:
            h = hash((cls.__name__,) + tuple(
                getattr(self, f) for f in self.__dataclass_fields__))
            object.__setattr__(self, "_hash", h)
            return h
    cls.__hash__ = cached_hash
    return cls


for _cls in (Conj, Disj, Neg, Modal):
    _install_cached_hash(_cls)

TT = Conj(())
FF = Disj(())

Formula = object  # Conj | Disj | Neg | Modal


def conj(items: Iterable) -> Formula:
    """Conjunction with syntactic de-duplication and singleton unwrapping."""
    seen, out = set(), []
    for f in items:
        if f not in seen:
            seen.add(f)
            out.append(f)
    if len(out) == 1:
        return out[0]
    return Conj(tuple(out))


def disj(items: Iterable) -> Formula:
    seen, out = set(), []
    for f in items:
        if f not in seen:
            seen.add(f)
            out.append(f)
    if len(out) == 1:
        return out[0]
    return Disj(tuple(out))


def print_formula(phi: Formula) -> str:
    return str(phi)


def eval_formula(c: Coalgebra, phi: Formula) -> frozenset:
    """The set of states satisfying the formula."""
    cache: dict = {}
    all_states = frozenset(c.states)

    def go(f) -> frozenset:
        if f in cache:
            return cache[f]
        if isinstance(f, Conj):
            out = all_states
            for g in f.items:
                out &= go(g)
        elif isinstance(f, Disj):
            out = frozenset()
            for g in f.items:
                out |= go(g)
        elif isinstance(f, Neg):
            out = all_states - go(f.body)
        elif isinstance(f, Modal):
            members = go(f.body)
            out = frozenset(x for x in c.states
                            if eval_modality(f.modality, observe(c, x, members)))
        else:
            raise CoalgebraError(f"unknown formula node {f!r}")
        cache[f] = out
        return out

    return go(phi)


# ---------------------------------------------------------------------------
# Distinguishing formulas
# ---------------------------------------------------------------------------

def distinguishing_formula(c: Coalgebra, part: Partition, st: StrategyTable,
                           pos: tuple) -> Formula:
    """A formula satisfied by pos[0] but not pos[1].

    Built along the spoiler strategy: the pair's recorded (state, class)
    move gives a cone modality over the state's observation of the class.
    The body separates the class from every previous-round class that the
    pair's successors can reach (one representative pair per class,
    recursively); on the pair's successors it then coincides with the
    class's characteristic predicate, which is all the cone needs.
    """
    memo: dict = {}

    def go(x0: State, x1: State) -> Formula:
        key = (x0, x1)
        if key in memo:
            return memo[key]
        i = st.index(x0, x1)
        if i == INF:
            raise CoalgebraError("states bisimilar")
        s, blk = st.move(x0, x1)
        v = observe(c, s, blk)
        if i <= 1:
            body = TT
        else:
            reach = successors(c, x0) | successors(c, x1)
            x0p = min(blk)
            body = conj(go(x0p, min(b))
                        for b in st.rounds[int(i) - 1].blocks
                        if b != blk and b & reach)
        phi = Modal(Cone(v), body)
        if s == x1:
            phi = Neg(phi)
        memo[key] = phi
        return phi

    return go(*pos)


# ---------------------------------------------------------------------------
# Strong separation and recoding
# ---------------------------------------------------------------------------

def is_strongly_separating(mods: Iterable, f2: Iterable) -> bool:
    """Whether every two distinct observations differ under some modality."""
    mods = list(mods)
    f2 = list(f2)
    for i, u in enumerate(f2):
        for w in f2[i + 1:]:
            if all(eval_modality(m, u) == eval_modality(m, w) for m in mods):
                return False
    return True


def closure(mods: Iterable, f2: Optional[Iterable] = None) -> list:
    """mods extended with their one/zero/neg pre-compositions.

    With f2 given, the result is de-duplicated extensionally (two
    modalities agreeing on all of f2 count as one, the earlier kept).
    """
    out = []
    for m in mods:
        out.append(m)
        for pre in (PRE_ONE, PRE_ZERO, PRE_NEG):
            out.append(Closed(m, pre))
    if f2 is None:
        seen = set()
        return [m for m in out if not (m in seen or seen.add(m))]
    f2 = list(f2)
    kept, tables = [], set()
    for m in out:
        table = tuple(eval_modality(m, u) for u in f2)
        if table not in tables:
            tables.add(table)
            kept.append(m)
    return kept


def box_dia_modalities(alphabet: Iterable[Label]) -> list:
    return ([Box(a) for a in sorted(set(alphabet))]
            + [Dia(a) for a in sorted(set(alphabet))])


def _upset_sorted(v, f2: list) -> list:
    """The upset of v, ordered by height in the upset, then by print form."""
    up = [u for u in f2 if leq(v, u)]
    return sorted(up, key=lambda u: (sum(1 for w in up if leq(w, u)), str(u)))


def recode_finite(phi: Formula, mods: list, f2: list) -> Formula:
    """Replace every cone modality by a disjunction over its upset.

    Each disjunct pins down one observation u above the cone's vertex as
    the signed profile of u under mods; requires mods to be strongly
    separating over f2.
    """
    if not is_strongly_separating(mods, f2):
        raise CoalgebraError("modality set is not strongly separating")
    cache: dict = {}

    def go(f) -> Formula:
        if f in cache:
            return cache[f]
        if isinstance(f, Conj):
            out = Conj(tuple(go(g) for g in f.items))
        elif isinstance(f, Disj):
            out = Disj(tuple(go(g) for g in f.items))
        elif isinstance(f, Neg):
            out = Neg(go(f.body))
        elif isinstance(f, Modal) and isinstance(f.modality, Cone):
            body = go(f.body)
            terms = []
            for u in _upset_sorted(f.modality.v, f2):
                lits = [Modal(m, body) if eval_modality(m, u)
                        else Neg(Modal(m, body)) for m in mods]
                terms.append(conj(lits))
            out = disj(terms)
        elif isinstance(f, Modal):
            out = Modal(f.modality, go(f.body))
        else:
            raise CoalgebraError(f"unknown formula node {f!r}")
        cache[f] = out
        return out

    return go(phi)


def recode_prob(phi: Formula) -> Formula:
    """Replace every cone over a probabilistic observation by thresholds.

    The cone at v holds iff per label the component clears v's value:
    at least v(a) when v(a) is a probability, termination when v(a) is.
    """
    cache: dict = {}

    def go(f) -> Formula:
        if f in cache:
            return cache[f]
        if isinstance(f, Conj):
            out = Conj(tuple(go(g) for g in f.items))
        elif isinstance(f, Disj):
            out = Disj(tuple(go(g) for g in f.items))
        elif isinstance(f, Neg):
            out = Neg(go(f.body))
        elif isinstance(f, Modal) and isinstance(f.modality, Cone):
            v = f.modality.v
            if not isinstance(v, ProbObs):
                raise CoalgebraError("threshold recoding needs probabilistic cones")
            body = go(f.body)
            lits = []
            for a, x in v.entries:
                if x is None:
                    lits.append(Modal(IsTerminate(a), body))
                else:
                    lits.append(Modal(AtLeast(a, x), body))
            out = conj(lits)
        elif isinstance(f, Modal):
            out = Modal(f.modality, go(f.body))
        else:
            raise CoalgebraError(f"unknown formula node {f!r}")
        cache[f] = out
        return out

    return go(phi)


def recode_for(c: Coalgebra, phi: Formula) -> Formula:
    """The natural recoding for the system's branching type."""
    if c.kind == "pts":
        return recode_prob(phi)
    if len(c.alphabet) > 8:
        raise CoalgebraError("recoding rejected: alphabet too large "
                             "(F2 has 4^|A| elements)")
    return recode_finite(phi, box_dia_modalities(c.alphabet), enumerate_f2(c))


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

class ParseError(CoalgebraError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.i = 0

    def skip_ws(self) -> None:
        while self.i < len(self.text) and self.text[self.i].isspace():
            self.i += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.i] if self.i < len(self.text) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            raise ParseError(f"expected {ch!r}", self.i)
        self.i += 1

    def formula(self) -> Formula:
        ch = self.peek()
        if self.text.startswith("tt", self.i):
            self.i += 2
            return TT
        if self.text.startswith("ff", self.i):
            self.i += 2
            return FF
        if ch == "!":
            self.i += 1
            self.expect("(")
            body = self.formula()
            self.expect(")")
            return Neg(body)
        if ch == "(":
            return self.junction()
        if ch == "[":
            return self.modal()
        raise ParseError("expected a formula", self.i)

    def junction(self) -> Formula:
        self.expect("(")
        items = [self.formula()]
        op = self.peek()
        if op == ")":
            self.i += 1
            return Conj(tuple(items))
        if op not in "&|":
            raise ParseError("expected '&', '|' or ')'", self.i)
        while self.peek() == op:
            self.i += 1
            items.append(self.formula())
        self.expect(")")
        return Conj(tuple(items)) if op == "&" else Disj(tuple(items))

    def modal(self) -> Formula:
        self.expect("[")
        end = self.text.find("]", self.i)
        if end < 0:
            raise ParseError("unterminated modality", self.i)
        inner = self.text[self.i:end].strip()
        self.i = end + 1
        return Modal(self._modality(inner, end), self.formula())

    def _modality(self, inner: str, end: int):
        if inner.startswith("^"):
            return Cone(parse_observation(inner[1:].strip()))
        if inner.startswith("box "):
            return Box(inner[4:].strip())
        if inner.startswith("dia "):
            return Dia(inner[4:].strip())
        if inner.endswith("=*"):
            return IsTerminate(inner[:-2].strip())
        if ">=" in inner:
            label, _, q = inner.partition(">=")
            try:
                return AtLeast(label.strip(), Fraction(q.strip()))
            except (ValueError, ZeroDivisionError):
                raise ParseError(f"bad rational {q.strip()!r}", end) from None
        raise ParseError(f"unknown modality {inner!r}", end)


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    phi = p.formula()
    p.skip_ws()
    if p.i != len(text):
        raise ParseError("trailing input", p.i)
    return phi
