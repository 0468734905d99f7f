"""Line-oriented text formats for orders, matrix games and priority arenas.

All three share the same lexical rules: ``#`` starts a comment, blank lines
are ignored, and each remaining line is a keyword followed by
whitespace-separated arguments. Chains such as ``a<b<c`` denote the pairs
``a<b`` and ``b<c``.

Relation file::

    elements 1 2 3 4 5
    order 1<2<3<4<5
    closure            # optional: close the listed pairs transitively

Game file::

    players 2
    outcomes X Y Z
    payoff X 1 0       # optional, one line per outcome
    matrix X Z         # one line per row of Player 1
    matrix Y Y
    pref1 X<Y Y<Z      # a strict order given by its pairs
    pref2 closure X<Y  # an acyclic relation, closed transitively
    pref1 payoff       # greater own payoff component is better

Arena file::

    # id owner priority successors...
    0 1 2 1 2
    1 2 3 0
    initial 0
    payoff 2 1 0
    payoff 3 0 1/2
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .games import MatrixGame, MatrixGameForm, PayoffTable, Player, payoff_prefs
from .poset import BinaryRelation, Poset, transitive_closure, validate_order
from .priority import Arena, PriorityGame

__all__ = [
    "GameSpec",
    "ParseError",
    "PrefSpec",
    "RelationSpec",
    "format_arena",
    "format_game",
    "format_relation",
    "parse_arena",
    "parse_game",
    "parse_relation",
]


class ParseError(ValueError):
    def __init__(self, lineno: int, message: str) -> None:
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def _lines(text: str) -> Iterator[tuple[int, str, list[str]]]:
    for lineno, raw in enumerate(text.splitlines(), 1):
        tokens = raw.split("#", 1)[0].split()
        if tokens:
            yield lineno, tokens[0], tokens[1:]


def _chain_pairs(lineno: int, tokens: Sequence[str], index: dict[str, int]) -> list[tuple[int, int]]:
    pairs = []
    for tok in tokens:
        parts = tok.split("<")
        if len(parts) < 2 or not all(parts):
            raise ParseError(lineno, f"expected a chain like a<b, got {tok!r}")
        for a, b in zip(parts, parts[1:]):
            for lab in (a, b):
                if lab not in index:
                    raise ParseError(lineno, f"unknown element {lab!r}")
            pairs.append((index[a], index[b]))
    return pairs


def _fraction(lineno: int, tok: str) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise ParseError(lineno, f"not a rational number: {tok!r}") from None


def _int(lineno: int, tok: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(lineno, f"not an integer: {tok!r}") from None


def _chains(labels: Sequence[str], pairs: Sequence[tuple[int, int]]) -> str:
    return " ".join(f"{labels[a]}<{labels[b]}" for a, b in pairs)


@dataclass(frozen=True)
class RelationSpec:
    labels: tuple[str, ...]
    relation: BinaryRelation
    close: bool = False

    def order(self) -> Poset:
        """Validate the relation as a strict order, or close it when ``closure`` was given."""
        if self.close:
            return transitive_closure(self.relation, self.labels)
        return validate_order(self.relation, self.labels)


def parse_relation(text: str) -> RelationSpec:
    labels: list[str] | None = None
    pairs: list[tuple[int, int]] = []
    close = False
    for lineno, key, args in _lines(text):
        if key == "elements":
            if labels is not None:
                raise ParseError(lineno, "elements given twice")
            if len(set(args)) != len(args):
                raise ParseError(lineno, "duplicate element names")
            labels = args
        elif key == "order":
            if labels is None:
                raise ParseError(lineno, "order before elements")
            pairs += _chain_pairs(lineno, args, {lab: i for i, lab in enumerate(labels)})
        elif key == "closure":
            if args:
                raise ParseError(lineno, "closure takes no arguments")
            close = True
        else:
            raise ParseError(lineno, f"unknown keyword {key!r}")
    if labels is None:
        raise ParseError(0, "missing elements line")
    return RelationSpec(tuple(labels), BinaryRelation.from_pairs(len(labels), pairs), close)


def format_relation(labels: Sequence[str], pairs: Sequence[tuple[int, int]], close: bool = False) -> str:
    lines = ["elements " + " ".join(labels)]
    if pairs:
        lines.append("order " + _chains(labels, pairs))
    if close:
        lines.append("closure")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class PrefSpec:
    """How a preference was written: ``order`` pairs, ``closure`` pairs, or ``payoff``."""

    kind: str = "order"
    pairs: tuple[tuple[int, int], ...] = ()


@dataclass(frozen=True)
class GameSpec:
    form: MatrixGameForm
    payoffs: PayoffTable | None
    prefs: tuple[PrefSpec, PrefSpec]

    def relations(self) -> tuple[BinaryRelation, BinaryRelation]:
        """The preferences exactly as written, before any closure."""
        n = self.form.outcomes
        out = []
        for who, spec in zip(Player, self.prefs):
            if spec.kind == "payoff":
                out.append(payoff_prefs(self._need_payoffs(), self.form.labels)[who - 1].relation())
            else:
                out.append(BinaryRelation.from_pairs(n, spec.pairs))
        return out[0], out[1]

    def game(self) -> MatrixGame:
        orders = []
        for who, (spec, rel) in enumerate(zip(self.prefs, self.relations()), 1):
            try:
                if spec.kind == "closure":
                    orders.append(transitive_closure(rel, self.form.labels))
                else:
                    orders.append(validate_order(rel, self.form.labels))
            except ValueError as exc:
                raise ValueError(f"pref{who}: {exc}") from exc
        return MatrixGame(self.form, orders[0], orders[1])

    def _need_payoffs(self) -> PayoffTable:
        if self.payoffs is None:
            raise ValueError("this game file has no payoff lines")
        return self.payoffs


def parse_game(text: str) -> GameSpec:
    labels: list[str] | None = None
    rows: list[list[str]] = []
    pays: dict[str, tuple[Fraction, Fraction]] = {}
    prefs: dict[str, PrefSpec] = {}
    last_line = 0

    def index() -> dict[str, int]:
        return {lab: i for i, lab in enumerate(labels or ())}

    for lineno, key, args in _lines(text):
        last_line = lineno
        if key != "players" and key != "outcomes" and labels is None:
            raise ParseError(lineno, f"{key} before outcomes")
        if key == "players":
            if args != ["2"]:
                raise ParseError(lineno, "only two-player games are supported")
        elif key == "outcomes":
            if labels is not None:
                raise ParseError(lineno, "outcomes given twice")
            if not args:
                raise ParseError(lineno, "at least one outcome is required")
            if len(set(args)) != len(args):
                raise ParseError(lineno, "duplicate outcome labels")
            if any("<" in a for a in args):
                raise ParseError(lineno, "outcome labels may not contain '<'")
            labels = args
        elif key == "payoff":
            if len(args) != 3:
                raise ParseError(lineno, "payoff needs an outcome and two numbers")
            if args[0] not in index():
                raise ParseError(lineno, f"unknown outcome {args[0]!r}")
            if args[0] in pays:
                raise ParseError(lineno, f"payoff for {args[0]!r} given twice")
            pays[args[0]] = (_fraction(lineno, args[1]), _fraction(lineno, args[2]))
        elif key == "matrix":
            for lab in args:
                if lab not in index():
                    raise ParseError(lineno, f"unknown outcome {lab!r}")
            if rows and len(args) != len(rows[0]):
                raise ParseError(lineno, f"row has {len(args)} entries, expected {len(rows[0])}")
            if not args:
                raise ParseError(lineno, "empty matrix row")
            rows.append(args)
        elif key in ("pref1", "pref2"):
            if key in prefs:
                raise ParseError(lineno, f"{key} given twice")
            if args == ["payoff"]:
                prefs[key] = PrefSpec("payoff")
            elif args[:1] == ["closure"]:
                prefs[key] = PrefSpec("closure", tuple(_chain_pairs(lineno, args[1:], index())))
            else:
                prefs[key] = PrefSpec("order", tuple(_chain_pairs(lineno, args, index())))
        else:
            raise ParseError(lineno, f"unknown keyword {key!r}")
    if labels is None:
        raise ParseError(last_line, "missing outcomes line")
    if not rows:
        raise ParseError(last_line, "missing matrix lines")
    payoffs = None
    if pays:
        missing = [lab for lab in labels if lab not in pays]
        if missing:
            raise ParseError(last_line, f"no payoff for outcomes {missing}")
        payoffs = PayoffTable(tuple(pays[lab] for lab in labels))
    spec = GameSpec(
        MatrixGameForm.from_labels(rows, labels),
        payoffs,
        (prefs.get("pref1", PrefSpec()), prefs.get("pref2", PrefSpec())),
    )
    if payoffs is None and any(p.kind == "payoff" for p in spec.prefs):
        raise ParseError(last_line, "payoff preferences need payoff lines")
    return spec


def format_game(spec: GameSpec) -> str:
    form = spec.form
    lines = ["players 2", "outcomes " + " ".join(form.labels)]
    if spec.payoffs is not None:
        lines += [f"payoff {lab} {a} {b}" for lab, (a, b) in zip(form.labels, spec.payoffs.pairs)]
    lines += ["matrix " + " ".join(form.labels[o] for o in row) for row in form.table]
    for who, pref in zip(("pref1", "pref2"), spec.prefs):
        if pref.kind == "payoff":
            lines.append(f"{who} payoff")
        elif pref.kind == "closure":
            lines.append(f"{who} closure {_chains(form.labels, pref.pairs)}".rstrip())
        elif pref.pairs:
            lines.append(f"{who} {_chains(form.labels, pref.pairs)}")
    return "\n".join(lines) + "\n"


def parse_arena(text: str) -> PriorityGame:
    vertices: dict[int, tuple[int, Player, int, list[int]]] = {}
    initial = 0
    payoff: dict[int, tuple[Fraction, Fraction]] = {}
    last_line = 0
    for lineno, key, args in _lines(text):
        last_line = lineno
        if key == "initial":
            if len(args) != 1:
                raise ParseError(lineno, "initial takes one vertex id")
            initial = _int(lineno, args[0])
        elif key == "payoff":
            if len(args) != 3:
                raise ParseError(lineno, "payoff needs a priority and two numbers")
            p = _int(lineno, args[0])
            if p in payoff:
                raise ParseError(lineno, f"payoff for priority {p} given twice")
            payoff[p] = (_fraction(lineno, args[1]), _fraction(lineno, args[2]))
        else:
            v = _int(lineno, key)
            if len(args) < 3:
                raise ParseError(lineno, "vertex line needs owner, priority and at least one successor")
            if v in vertices:
                raise ParseError(lineno, f"vertex {v} defined twice")
            owner = _int(lineno, args[0])
            if owner not in (1, 2):
                raise ParseError(lineno, f"owner must be 1 or 2, got {owner}")
            succ = [_int(lineno, t) for tok in args[2:] for t in tok.split(",") if t]
            vertices[v] = (lineno, Player(owner), _int(lineno, args[1]), succ)
    if not vertices:
        raise ParseError(last_line, "no vertex lines")
    n = len(vertices)
    if sorted(vertices) != list(range(n)):
        raise ParseError(last_line, f"vertex ids must be 0..{n - 1}")
    for v, (lineno, _, prio, succ) in vertices.items():
        if prio < 0:
            raise ParseError(lineno, "priorities must be natural numbers")
        for w in succ:
            if not 0 <= w < n:
                raise ParseError(lineno, f"successor {w} is not a vertex")
    try:
        arena = Arena(
            tuple(vertices[v][1] for v in range(n)),
            tuple(tuple(vertices[v][3]) for v in range(n)),
            tuple(vertices[v][2] for v in range(n)),
            initial,
        )
        return PriorityGame(arena, payoff)
    except ValueError as exc:
        raise ParseError(last_line, str(exc)) from None


def format_arena(game: PriorityGame) -> str:
    a = game.arena
    lines = ["# id owner priority successors"]
    lines += [f"{v} {int(a.owner[v])} {a.priority[v]} " + " ".join(map(str, a.edges[v])) for v in range(a.n)]
    lines.append(f"initial {a.initial}")
    lines += [f"payoff {p} {x} {y}" for p, (x, y) in sorted(game.payoff.items())]
    return "\n".join(lines) + "\n"
