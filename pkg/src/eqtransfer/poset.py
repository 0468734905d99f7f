"""Finite strict partial orders and their lift to subsets and multisets.

Subsets of a carrier ``0..size-1`` are plain ``int`` bit masks (bit ``i`` set
means element ``i`` belongs to the set), so they grow with the carrier and
symmetric difference is a single ``^``.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

__all__ = [
    "BinaryRelation",
    "CyclicRelation",
    "ElementNotInSet",
    "EmptyInput",
    "NotIrreflexive",
    "NotTransitive",
    "OrderError",
    "Poset",
    "bits",
    "is_acyclic",
    "lift_less",
    "lift_less_poly",
    "lift_less_witness",
    "linear_extension",
    "mask_of",
    "maximal_elements",
    "multiset_lift_less",
    "replace_with_preferred",
    "transitive_closure",
    "upper_set",
    "upper_set_of",
    "validate_order",
]


def bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(items: Iterable[int]) -> int:
    mask = 0
    for i in items:
        if i < 0:
            raise ValueError(f"negative element index {i}")
        mask |= 1 << i
    return mask


class OrderError(ValueError):
    """A relation fails to be a strict partial order."""


class NotIrreflexive(OrderError):
    def __init__(self, x: int) -> None:
        super().__init__(f"relation is not irreflexive: {x} < {x}")
        self.x = x


class NotTransitive(OrderError):
    def __init__(self, x: int, y: int, z: int) -> None:
        super().__init__(f"relation is not transitive: {x} < {y} and {y} < {z} but not {x} < {z}")
        self.x, self.y, self.z = x, y, z


class CyclicRelation(OrderError):
    def __init__(self, cycle: Sequence[int]) -> None:
        super().__init__("relation has a cycle: " + " -> ".join(map(str, [*cycle, cycle[0]])))
        self.cycle = list(cycle)


class EmptyInput(ValueError):
    pass


class ElementNotInSet(ValueError):
    pass


def _table(rel: Sequence[Sequence[bool]]) -> tuple[tuple[bool, ...], ...]:
    table = tuple(tuple(bool(b) for b in row) for row in rel)
    for row in table:
        if len(row) != len(table):
            raise ValueError(f"relation table must be square, got a row of length {len(row)} in a {len(table)}-row table")
    return table


def _row_masks(table: tuple[tuple[bool, ...], ...]) -> tuple[int, ...]:
    return tuple(mask_of(j for j, b in enumerate(row) if b) for row in table)


@dataclass(frozen=True)
class BinaryRelation:
    """An arbitrary relation on ``0..size-1``; ``rel[x][y]`` reads "x is below y"."""

    rel: tuple[tuple[bool, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "rel", _table(self.rel))

    @classmethod
    def from_pairs(cls, size: int, pairs: Iterable[tuple[int, int]]) -> BinaryRelation:
        table = [[False] * size for _ in range(size)]
        for x, y in pairs:
            if not (0 <= x < size and 0 <= y < size):
                raise IndexError(f"pair ({x}, {y}) outside carrier of size {size}")
            table[x][y] = True
        return cls(table)

    @property
    def size(self) -> int:
        return len(self.rel)

    def less(self, x: int, y: int) -> bool:
        return self.rel[x][y]

    def pairs(self) -> list[tuple[int, int]]:
        return [(x, y) for x, row in enumerate(self.rel) for y, b in enumerate(row) if b]

    def successors(self) -> tuple[int, ...]:
        return _row_masks(self.rel)


def _order_violation(succ: Sequence[int]) -> OrderError | None:
    for x, s in enumerate(succ):
        if s >> x & 1:
            return NotIrreflexive(x)
    for x, s in enumerate(succ):
        for y in bits(s):
            missing = succ[y] & ~s
            if missing:
                return NotTransitive(x, y, next(bits(missing)))
    return None


@dataclass(frozen=True)
class Poset:
    """A strict partial order on ``0..size-1`` with display labels.

    Construction validates irreflexivity and transitivity and raises an
    :class:`OrderError` subclass naming the first violation.
    """

    rel: tuple[tuple[bool, ...], ...]
    labels: tuple[str, ...] = ()
    up: tuple[int, ...] = field(init=False, repr=False, compare=False)
    down: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        table = _table(self.rel)
        labels = tuple(str(lab) for lab in self.labels) or tuple(str(i) for i in range(len(table)))
        if len(labels) != len(table):
            raise ValueError(f"{len(labels)} labels for a carrier of size {len(table)}")
        up = _row_masks(table)
        err = _order_violation(up)
        if err is not None:
            raise err
        down = [0] * len(table)
        for x, s in enumerate(up):
            for y in bits(s):
                down[y] |= 1 << x
        object.__setattr__(self, "rel", table)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "up", up)
        object.__setattr__(self, "down", tuple(down))

    @classmethod
    def from_pairs(cls, size: int, pairs: Iterable[tuple[int, int]], labels: Sequence[str] = ()) -> Poset:
        return cls(BinaryRelation.from_pairs(size, pairs).rel, tuple(labels))

    @classmethod
    def antichain(cls, size: int, labels: Sequence[str] = ()) -> Poset:
        return cls.from_pairs(size, (), labels)

    @classmethod
    def chain(cls, size: int, labels: Sequence[str] = ()) -> Poset:
        """The total order ``0 < 1 < ... < size-1``."""
        return cls.from_pairs(size, ((x, y) for x in range(size) for y in range(x + 1, size)), labels)

    @property
    def size(self) -> int:
        return len(self.rel)

    @property
    def carrier(self) -> int:
        return (1 << self.size) - 1

    def less(self, x: int, y: int) -> bool:
        return self.rel[x][y]

    def pairs(self) -> list[tuple[int, int]]:
        return [(x, y) for x in range(self.size) for y in bits(self.up[x])]

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown element {label!r}") from None

    def subset(self, labels: Iterable[str]) -> int:
        return mask_of(self.index(lab) for lab in labels)

    def names(self, mask: int) -> list[str]:
        return [self.labels[i] for i in bits(mask)]

    def relation(self) -> BinaryRelation:
        return BinaryRelation(self.rel)


def validate_order(r: BinaryRelation, labels: Sequence[str] = ()) -> Poset:
    return Poset(r.rel, tuple(labels))


def _find_cycle(succ: Sequence[int]) -> list[int] | None:
    white, grey, black = 0, 1, 2
    color = [white] * len(succ)
    for root in range(len(succ)):
        if color[root] != white:
            continue
        path = [root]
        stack = [bits(succ[root])]
        color[root] = grey
        while stack:
            for nxt in stack[-1]:
                if color[nxt] == grey:
                    return path[path.index(nxt):]
                if color[nxt] == white:
                    color[nxt] = grey
                    path.append(nxt)
                    stack.append(bits(succ[nxt]))
                    break
            else:
                color[path.pop()] = black
                stack.pop()
    return None


def is_acyclic(r: BinaryRelation) -> bool:
    return _find_cycle(r.successors()) is None


def transitive_closure(r: BinaryRelation, labels: Sequence[str] = ()) -> Poset:
    """Close an acyclic relation into the strict partial order it generates."""
    succ = r.successors()
    cycle = _find_cycle(succ)
    if cycle is not None:
        raise CyclicRelation(cycle)
    reach = list(succ)
    # reverse topological order: every successor is finished before its predecessors
    for x in reversed(_topological(succ)):
        for y in bits(succ[x]):
            reach[x] |= reach[y]
    table = [[bool(reach[x] >> y & 1) for y in range(len(succ))] for x in range(len(succ))]
    return Poset(table, tuple(labels))


def _topological(succ: Sequence[int]) -> list[int]:
    """Kahn's algorithm, smallest available index first."""
    indeg = [0] * len(succ)
    for s in succ:
        for y in bits(s):
            indeg[y] += 1
    ready = [x for x, d in enumerate(indeg) if d == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        x = heapq.heappop(ready)
        order.append(x)
        for y in bits(succ[x]):
            indeg[y] -= 1
            if indeg[y] == 0:
                heapq.heappush(ready, y)
    return order


def _check_element(p: Poset, x: int) -> None:
    if not 0 <= x < p.size:
        raise IndexError(f"element {x} outside carrier of size {p.size}")


def _check_subset(p: Poset, mask: int) -> None:
    if mask < 0 or mask >> p.size:
        raise IndexError(f"subset {mask:#x} has elements outside carrier of size {p.size}")


def upper_set(p: Poset, x: int) -> int:
    _check_element(p, x)
    return p.up[x]


def upper_set_of(p: Poset, ys: int) -> int:
    _check_subset(p, ys)
    out = 0
    for y in bits(ys):
        out |= p.up[y]
    return out


def lift_less_witness(p: Poset, a: int, b: int) -> bool:
    """Definitional check of the lift: search every nonempty ``A' ⊆ A \\ B``.

    Exponential in ``|A \\ B|``; kept as a reference oracle for :func:`lift_less`.
    """
    only_a = a & ~b
    sub = only_a
    while sub:
        covered = sub | upper_set_of(p, sub)
        if a & ~covered == b & ~covered:
            return True
        sub = (sub - 1) & only_a
    return False


def lift_less(p: Poset, a: int, b: int) -> bool:
    """``A`` lies below ``B`` in the lift: every minimum of ``A Δ B`` belongs to ``A``."""
    diff = a ^ b
    if not diff:
        return False
    for x in bits(diff):
        if not p.down[x] & diff and not a >> x & 1:
            return False
    return True


def lift_less_poly(p: Poset, a: int, b: int) -> bool:
    """Every element of ``B \\ A`` has a strictly smaller element in ``A \\ B``."""
    if a == b:
        return False
    only_a = a & ~b
    return all(p.down[x] & only_a for x in bits(b & ~a))


def maximal_elements(p: Poset, s: int) -> int:
    if not s:
        raise EmptyInput("maximal elements of the empty set are undefined")
    _check_subset(p, s)
    return mask_of(x for x in bits(s) if not p.up[x] & s)


def linear_extension(p: Poset) -> list[int]:
    return _topological(p.up)


def replace_with_preferred(p: Poset, m: int, a: int) -> int:
    """Drop ``m`` from ``A`` and add everything strictly above ``m``."""
    _check_element(p, m)
    if not a >> m & 1:
        raise ElementNotInSet(f"element {m} is not in the set {p.names(a)}")
    return (a & ~(1 << m)) | p.up[m]


def multiset_lift_less(p: Poset, f: Mapping[int, int], g: Mapping[int, int]) -> bool:
    for ms in (f, g):
        for x, k in ms.items():
            _check_element(p, x)
            if k < 0:
                raise ValueError(f"negative multiplicity {k} for element {x}")
    keys = set(f) | set(g)
    more_in_f = mask_of(x for x in keys if g.get(x, 0) < f.get(x, 0))
    more_in_g = mask_of(x for x in keys if f.get(x, 0) < g.get(x, 0))
    return lift_less(p, more_in_f, more_in_g)
