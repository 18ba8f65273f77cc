"""CSV persistence for transition systems.

Layout (UTF-8, comma separated, `#` starts a comment line):

    kind,lts            or  kind,pts
    alphabet,a,b
    state,1
    ...
    trans,src,label,dst           (lts)
    trans,src,label,dst,num/den   (pts; weight may also be an integer)
    term,src,label                (pts; explicit termination)

For pts systems a (state,label) pair with no rows defaults to termination.
"""
from __future__ import annotations

import csv
import io
from fractions import Fraction


from .coalgebra import LTS, PTS, Coalgebra, CoalgebraError, validate


class CsvError(CoalgebraError):
    """Raised for malformed system files, with the offending line number."""


def loads(text: str) -> Coalgebra:
    kind = None
    alphabet: list = []
    states: list = []
    lts_edges: list = []
    pts_rows: dict = {}
    pts_terms: set = set()

    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        row = [cell.strip() for cell in row]
        if not row or not row[0] or row[0].startswith("#"):
            continue
        tag, rest = row[0], row[1:]
        if tag == "kind":
            if len(rest) != 1 or rest[0] not in (LTS, PTS):
                raise CsvError(f"line {lineno}: kind must be 'lts' or 'pts'")
            kind = rest[0]
        elif tag == "alphabet":
            alphabet = [a for a in rest if a]
        elif tag == "state":
            if len(rest) != 1 or not rest[0]:
                raise CsvError(f"line {lineno}: state row needs one identifier")
            states.append(rest[0])
        elif tag == "trans":
            if kind is None:
                raise CsvError(f"line {lineno}: kind must come before transitions")
            if kind == LTS:
                if len(rest) != 3:
                    raise CsvError(f"line {lineno}: lts trans needs src,label,dst")
                lts_edges.append(tuple(rest))
            else:
                if len(rest) != 4:
                    raise CsvError(f"line {lineno}: pts trans needs src,label,dst,weight")
                src, label, dst, weight = rest
                try:
                    w = Fraction(weight)
                except (ValueError, ZeroDivisionError):
                    raise CsvError(f"line {lineno}: bad weight {weight!r}") from None
                if (src, label) in pts_terms:
                    raise CsvError(f"line {lineno}: ({src},{label}) already terminates")
                pts_rows.setdefault((src, label), {})
                if dst in pts_rows[(src, label)]:
                    raise CsvError(f"line {lineno}: duplicate pts transition "
                                   f"({src},{label},{dst})")
                pts_rows[(src, label)][dst] = w
        elif tag == "term":
            if kind != PTS:
                raise CsvError(f"line {lineno}: term rows only apply to pts")
            if len(rest) != 2:
                raise CsvError(f"line {lineno}: term needs src,label")
            src, label = rest
            if (src, label) in pts_rows:
                raise CsvError(f"line {lineno}: ({src},{label}) already has a distribution")
            pts_terms.add((src, label))
        else:
            raise CsvError(f"line {lineno}: unknown row tag {tag!r}")

    if kind is None:
        raise CsvError("missing kind row")
    if kind == LTS:
        return Coalgebra.lts(states, alphabet, lts_edges)
    return Coalgebra.pts(states, alphabet, pts_rows)


def dumps(c: Coalgebra) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["kind", c.kind])
    w.writerow(["alphabet", *c.alphabet])
    for x in c.states:
        w.writerow(["state", x])
    if c.kind == LTS:
        for x in c.states:
            for a, y in sorted(c.transitions[x]):
                w.writerow(["trans", x, a, y])
    else:
        for x in c.states:
            for a in c.alphabet:
                dist = c.transitions[x][a]
                if dist is None:
                    w.writerow(["term", x, a])
                else:
                    for y, wt in sorted(dist.items()):
                        w.writerow(["trans", x, a, y, str(wt)])
    return out.getvalue()


def load(path) -> Coalgebra:
    with open(path, encoding="utf-8") as fh:
        c = loads(fh.read())
    problems = validate(c)
    if problems:
        raise CsvError(f"{path}: invalid system: " + "; ".join(problems))
    return c


def save(c: Coalgebra, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(c))
