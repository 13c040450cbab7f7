"""Weights, cup diagrams and exchange moves.

A weight of type (m, n) is a string over {'v', '^'} recording m down
marks 'v' and n up marks '^' on m + n points of a horizontal line.  The
height of a weight counts, over all down marks, the up marks strictly to
their left; it ranges from 0 (all downs before all ups) to m * n.

Matching 'v^' pairs recursively yields the cup diagram of a weight: each
matched pair becomes a cup, unmatched marks become downward rays.  Cups
never cross, so they carry a nesting forest.  Reversing the two marks
joined by a cup is the exchange move; exchanges generate the neighbour
graph on weights that underlies the quiver presentation downstream.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from .errors import CapacityError

DOWN = "v"
UP = "^"
_MARKS = {DOWN, UP}

DEFAULT_CAPACITY = 14
CAPACITY_ENV = "ARCDUAL_CAPACITY"


def capacity() -> int:
    """Enumeration capacity: the largest m + n enumerate_weights accepts."""
    raw = os.environ.get(CAPACITY_ENV)
    if raw is None:
        return DEFAULT_CAPACITY
    try:
        value = int(raw)
    except ValueError as exc:
        raise CapacityError(f"{CAPACITY_ENV} must be an integer, got {raw!r}") from exc
    if value < 1:
        raise CapacityError(f"{CAPACITY_ENV} must be positive, got {value}")
    return value


def check_capacity(total: int) -> None:
    cap = capacity()
    if total > cap:
        raise CapacityError(
            f"{total} points exceed the enumeration capacity {cap}; "
            f"set {CAPACITY_ENV} to raise the bound"
        )


def weight_type(w: str) -> tuple[int, int]:
    """Return (m, n): the number of down and up marks of the weight."""
    if not isinstance(w, str) or not set(w) <= _MARKS:
        raise ValueError(f"not a weight: {w!r}")
    m = w.count(DOWN)
    return m, len(w) - m


def height(w: str) -> int:
    total = 0
    ups = 0
    for c in w:
        if c == UP:
            ups += 1
        else:
            total += ups
    return total


def sort_key(w: str):
    """Canonical order on weights: height first, then left-to-right with
    'v' before '^'.  Comparing raw strings would order '^' before 'v'."""
    return height(w), tuple(0 if c == DOWN else 1 for c in w)


def lowest_weight(m: int, n: int) -> str:
    return DOWN * m + UP * n


def highest_weight(m: int, n: int) -> str:
    return UP * n + DOWN * m


def enumerate_weights(m: int, n: int) -> tuple[str, ...]:
    """All weights of type (m, n) in canonical order."""
    if m < 0 or n < 0:
        raise ValueError(f"weight type must be non-negative, got ({m}, {n})")
    check_capacity(m + n)
    return _enumerate_weights(m, n)


@lru_cache(maxsize=None)
def _enumerate_weights(m: int, n: int) -> tuple[str, ...]:
    out = []
    for ups in combinations(range(m + n), n):
        marks = [DOWN] * (m + n)
        for i in ups:
            marks[i] = UP
        out.append("".join(marks))
    out.sort(key=sort_key)
    return tuple(out)


@dataclass(frozen=True)
class CupDiagram:
    """Cups (left, right) sorted by left endpoint, plus downward rays."""

    cups: tuple[tuple[int, int], ...]
    rays: tuple[int, ...]


@lru_cache(maxsize=None)
def cup_matching(w: str) -> CupDiagram:
    """Match 'v^' pairs recursively; unmatched marks become rays.

    The matched pair (i, j) always has w[i] == 'v' and w[j] == '^'; the
    leftover rays read '^' * a + 'v' * b left to right.
    """
    weight_type(w)
    stack: list[int] = []
    cups: list[tuple[int, int]] = []
    up_rays: list[int] = []
    for i, c in enumerate(w):
        if c == DOWN:
            stack.append(i)
        elif stack:
            cups.append((stack.pop(), i))
        else:
            up_rays.append(i)
    cups.sort()
    return CupDiagram(tuple(cups), tuple(sorted(up_rays + stack)))


def defect(w: str) -> int:
    """Number of cups of the cup diagram of w (equivalently, of circles
    in the degree-zero diagram on w)."""
    return len(cup_matching(w).cups)


@dataclass(frozen=True)
class Circle:
    """A cup of the degree-zero diagram, with its nesting data.

    depth counts the cups strictly enclosing this one; encloses lists the
    cups strictly inside, sorted by left endpoint.
    """

    pair: tuple[int, int]
    depth: int
    encloses: tuple[tuple[int, int], ...]


@lru_cache(maxsize=None)
def circles_of(w: str) -> tuple[Circle, ...]:
    cups = cup_matching(w).cups
    out = []
    for i, j in cups:
        inner = tuple(p for p in cups if i < p[0] and p[1] < j)
        depth = sum(1 for p in cups if p[0] < i and j < p[1])
        out.append(Circle((i, j), depth, inner))
    return tuple(out)


def exchange_pair(w: str, pair: tuple[int, int]) -> str:
    """Reverse the two marks joined by the given cup of w's cup diagram.

    Raises ValueError when the pair is not such a cup.  The height of the
    result is height(w) + 2k + 1 where k cups nest strictly inside.
    """
    pair = tuple(pair)
    if pair not in cup_matching(w).cups:
        raise ValueError(f"{pair} is not a cup of the cup diagram of {w!r}")
    i, j = pair
    marks = list(w)
    marks[i], marks[j] = UP, DOWN
    return "".join(marks)


def upper_neighbours(w: str) -> tuple[tuple[tuple[int, int], str], ...]:
    """All exchange moves out of w, as (cup, resulting weight) pairs."""
    return tuple((c.pair, exchange_pair(w, c.pair)) for c in circles_of(w))


def is_nested(inner: tuple[int, int], outer: tuple[int, int]) -> bool:
    """Strict containment of index intervals."""
    return outer[0] < inner[0] and inner[1] < outer[1]


def is_left_of(p: tuple[int, int], q: tuple[int, int]) -> bool:
    """Disjoint intervals with p entirely before q."""
    return p[1] < q[0]


def delete_positions(w: str, positions) -> str:
    drop = set(positions)
    return "".join(c for i, c in enumerate(w) if i not in drop)


def weight_json(w: str) -> dict:
    return {"marks": w, "height": height(w), "defect": defect(w)}
