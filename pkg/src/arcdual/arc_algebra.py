"""Arc diagrams and the diagram algebra they span.

A basis diagram glues the cup diagram of a weight alpha, a weight lambda
written on the horizontal line, and the cap diagram (mirrored cup
diagram) of a weight beta.  The gluing is admissible when

  (1) each cup and cap carries opposite marks of lambda at its two
      endpoints (every arc is consistently oriented), and
  (2) reading left to right, the marks of lambda at the downward rays
      avoid the pattern v ... ^, and likewise at the upward rays.

The degree of a diagram counts its clockwise arcs; an arc is clockwise
exactly when its left endpoint carries an up mark.

Multiplication stacks a diagram below another one with matching gluing
weight and resolves the facing cap/cup pairs of the middle band by
surgery, one pair at a time, outermost first.  Components of the picture
carry labels: a circle is counterclockwise (unit) or clockwise (dotted),
a line is oriented by its rays and never reoriented.  Each surgery merges
two components or splits one, transforming the multiset of labelled
states:

  merge:  unit*unit -> unit    unit*dot -> dot     dot*dot -> 0
          unit*line -> line    dot*line -> 0
          line*line -> 0 unless one line points up at both rays and the
          other down at both; then both reconnected lines survive
  split:  unit -> unit*dot + dot*unit    dot -> dot*dot
          line -> dot circle * the line (the pinched circle is clockwise)

The result is read off by re-orienting every component according to its
final label and collapsing the middle band.  The outcome is independent
of the order in which admissible (never nested inside a remaining) pairs
are resolved; a property test exercises random admissible orders.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import combinatorics as comb
from .combinatorics import DOWN, UP, cup_matching


class InvalidDiagram(ValueError):
    """Rejected gluing; `condition` names the violated requirement."""

    def __init__(self, message: str, condition: int):
        super().__init__(message)
        self.condition = condition


@dataclass(frozen=True)
class ArcDiagram:
    """Cup diagram of cup_weight, glued to the cap diagram of cap_weight
    along mid_weight.  Instances are only built through make_arc_diagram
    or by the surgery engine, both of which validate the gluing."""

    cup_weight: str
    mid_weight: str
    cap_weight: str

    def __repr__(self):
        return f"({self.cup_weight}|{self.mid_weight}|{self.cap_weight})"


def _oriented_arcs_ok(shape: str, lam: str) -> bool:
    return all(lam[i] != lam[j] for i, j in cup_matching(shape).cups)


def _ray_pattern_ok(shape: str, lam: str) -> bool:
    marks = [lam[p] for p in cup_matching(shape).rays]
    return not any(a == DOWN and b == UP for a, b in zip(marks, marks[1:]))


def classify_gluing(alpha: str, lam: str, beta: str) -> int:
    """0 when (alpha, lam, beta) glue to an arc diagram, else the number
    of the first violated condition (1: an arc with equal end marks,
    2: a forbidden v ... ^ ray pattern)."""
    if comb.weight_type(alpha) != comb.weight_type(lam) or comb.weight_type(
        beta
    ) != comb.weight_type(lam):
        raise ValueError(
            f"weights {alpha!r}, {lam!r}, {beta!r} are not all of one type"
        )
    if not (_oriented_arcs_ok(alpha, lam) and _oriented_arcs_ok(beta, lam)):
        return 1
    if not (_ray_pattern_ok(alpha, lam) and _ray_pattern_ok(beta, lam)):
        return 2
    return 0


def make_arc_diagram(alpha: str, lam: str, beta: str) -> ArcDiagram:
    condition = classify_gluing(alpha, lam, beta)
    if condition:
        raise InvalidDiagram(
            f"({alpha}|{lam}|{beta}) is not an arc diagram: "
            f"condition {condition} fails",
            condition,
        )
    return ArcDiagram(alpha, lam, beta)


def degree(d: ArcDiagram) -> int:
    """Number of clockwise cups plus clockwise caps."""
    lam = d.mid_weight
    cups = cup_matching(d.cup_weight).cups
    caps = cup_matching(d.cap_weight).cups
    return sum(1 for i, _ in cups if lam[i] == UP) + sum(
        1 for i, _ in caps if lam[i] == UP
    )


def idempotent(lam: str) -> ArcDiagram:
    """The unique degree-zero diagram with weight lam."""
    return ArcDiagram(lam, lam, lam)


@lru_cache(maxsize=None)
def oriented_shapes(lam: str) -> tuple[str, ...]:
    """Weights whose cup diagram is orientable by lam, canonically ordered.

    By the mirror symmetry of the conditions these also index the
    orientable cap diagrams, so the basis diagrams with middle weight lam
    are exactly the pairs (shape, shape') of oriented shapes.
    """
    m, n = comb.weight_type(lam)
    return tuple(
        a
        for a in comb.enumerate_weights(m, n)
        if _oriented_arcs_ok(a, lam) and _ray_pattern_ok(a, lam)
    )


def diagram_sort_key(d: ArcDiagram):
    return (
        degree(d),
        comb.sort_key(d.cup_weight),
        comb.sort_key(d.mid_weight),
        comb.sort_key(d.cap_weight),
    )


@lru_cache(maxsize=None)
def enumerate_basis(m: int, n: int) -> tuple[ArcDiagram, ...]:
    """All basis diagrams of type (m, n), sorted by degree then weights."""
    diagrams = []
    for lam in comb.enumerate_weights(m, n):
        shapes = oriented_shapes(lam)
        for a in shapes:
            for b in shapes:
                diagrams.append(ArcDiagram(a, lam, b))
    diagrams.sort(key=diagram_sort_key)
    return tuple(diagrams)


def graded_dimension(m: int, n: int) -> dict[int, int]:
    hist = Counter(degree(d) for d in enumerate_basis(m, n))
    return dict(sorted(hist.items()))


def dimension(m: int, n: int) -> int:
    return len(enumerate_basis(m, n))


def unit(m: int, n: int) -> dict[ArcDiagram, Fraction]:
    return {idempotent(lam): Fraction(1) for lam in comb.enumerate_weights(m, n)}


def involution_diagram(d: ArcDiagram) -> ArcDiagram:
    return ArcDiagram(d.cap_weight, d.mid_weight, d.cup_weight)


def involution(x: dict[ArcDiagram, Fraction]) -> dict[ArcDiagram, Fraction]:
    """Linear anti-automorphism reflecting diagrams top to bottom."""
    return {involution_diagram(d): c for d, c in x.items()}


def add_scaled(acc: dict, key, coeff) -> None:
    new = acc.get(key, 0) + coeff
    if new:
        acc[key] = new
    else:
        acc.pop(key, None)


# ---------------------------------------------------------------------------
# Surgery engine.
#
# Nodes are (level, position) with level 0 on the lower weight line and
# level 1 on the upper one.  Arcs are ("kind", (node,)) for rays and
# ("kind", (node, node)) otherwise; every node meets exactly two arcs,
# counting a ray once, so components are paths (lines) or cycles
# (circles).


@dataclass(frozen=True)
class _Component:
    key: frozenset
    nodes: frozenset
    ray_nodes: tuple
    is_line: bool


def _diagram_arcs(a: ArcDiagram, b: ArcDiagram) -> list:
    glue = cup_matching(a.cap_weight)
    arcs = []
    bottom = cup_matching(a.cup_weight)
    for i, j in bottom.cups:
        arcs.append(("cup", ((0, i), (0, j))))
    for p in bottom.rays:
        arcs.append(("rayb", ((0, p),)))
    for i, j in glue.cups:
        arcs.append(("low", ((0, i), (0, j))))
        arcs.append(("high", ((1, i), (1, j))))
    for p in glue.rays:
        arcs.append(("vert", ((0, p), (1, p))))
    top = cup_matching(b.cap_weight)
    for i, j in top.cups:
        arcs.append(("cap", ((1, i), (1, j))))
    for p in top.rays:
        arcs.append(("rayt", ((1, p),)))
    return arcs


def _components(arcs: list) -> list[_Component]:
    incident = defaultdict(list)
    for idx, (_, nodes) in enumerate(arcs):
        for nd in nodes:
            incident[nd].append(idx)
    assert all(len(v) == 2 for v in incident.values())
    adjacency = defaultdict(set)
    for pair in incident.values():
        a1, a2 = pair
        adjacency[a1].add(a2)
        adjacency[a2].add(a1)
    seen = set()
    comps = []
    for start in range(len(arcs)):
        if start in seen:
            continue
        stack, group = [start], {start}
        while stack:
            cur = stack.pop()
            for nxt in adjacency[cur]:
                if nxt not in group:
                    group.add(nxt)
                    stack.append(nxt)
        seen |= group
        nodes = frozenset(nd for idx in group for nd in arcs[idx][1])
        rays = tuple(
            sorted(arcs[idx][1][0] for idx in group if arcs[idx][0] in ("rayb", "rayt"))
        )
        assert len(rays) in (0, 2)
        comps.append(_Component(nodes, nodes, rays, bool(rays)))
    return comps


def _find(comps: list[_Component], node) -> _Component:
    for c in comps:
        if node in c.nodes:
            return c
    raise AssertionError(f"node {node} in no component")


def _run_surgery(a: ArcDiagram, b: ArcDiagram, order) -> dict[ArcDiagram, Fraction]:
    """Resolve the middle band of the stacked pair along the given order
    of glue cups.  Each chosen cup must be admissible: not nested inside
    a cup that has not been resolved yet."""
    glue = a.cap_weight
    lam, mu = a.mid_weight, b.mid_weight
    mid = cup_matching(glue)
    for p in mid.rays:
        assert lam[p] == mu[p]

    def mark(node) -> str:
        level, pos = node
        return lam[pos] if level == 0 else mu[pos]

    def is_ccw(component: _Component) -> bool:
        # The leftmost crossing of a circle with either weight line points
        # down exactly when the circle is counterclockwise.
        level0 = sorted(nd for nd in component.nodes if nd[0] == 0)
        probe = min(level0) if level0 else min(component.nodes)
        return mark(probe) == DOWN

    arcs = _diagram_arcs(a, b)
    comps = _components(arcs)
    # A state assigns each circle its label (True = counterclockwise);
    # lines carry no state, their rays keep their marks forever.
    init = frozenset(
        (c.key, is_ccw(c)) for c in comps if not c.is_line
    )
    states: dict[frozenset, Fraction] = {init: Fraction(1)}

    remaining = set(mid.cups)
    for pair in order:
        pair = tuple(pair)
        assert pair in remaining
        assert not any(
            comb.is_nested(pair, other) for other in remaining if other != pair
        ), f"surgery at {pair} blocked by an enclosing unresolved pair"
        remaining.discard(pair)
        i, j = pair
        c_low = _find(comps, (0, i))
        c_high = _find(comps, (1, i))
        arcs.remove(("low", ((0, i), (0, j))))
        arcs.remove(("high", ((1, i), (1, j))))
        arcs.append(("vert", ((0, i), (1, i))))
        arcs.append(("vert", ((0, j), (1, j))))
        comps = _components(arcs)
        touched = {(0, i), (0, j), (1, i), (1, j)}
        # every component meeting the four surgery nodes is newly formed:
        # merges and splits always change node sets, and reconnected lines
        # mix nodes of both inputs
        fresh = [c for c in comps if c.nodes & touched]

        new_states: dict[frozenset, Fraction] = {}

        def emit(state: dict, coeff: Fraction) -> None:
            add_scaled(new_states, frozenset(state.items()), coeff)

        if c_low.key != c_high.key:
            # merge
            if not c_low.is_line and not c_high.is_line:
                assert len(fresh) == 1 and not fresh[0].is_line
                merged = fresh[0].key
                for state, coeff in states.items():
                    st = dict(state)
                    l1 = st.pop(c_low.key)
                    l2 = st.pop(c_high.key)
                    if not l1 and not l2:
                        continue
                    st[merged] = l1 and l2
                    emit(st, coeff)
            elif c_low.is_line != c_high.is_line:
                assert len(fresh) == 1 and fresh[0].is_line
                circle = c_high if c_low.is_line else c_low
                for state, coeff in states.items():
                    st = dict(state)
                    if not st.pop(circle.key):
                        continue
                    emit(st, coeff)
            else:
                # two lines reconnect into two lines
                assert len(fresh) == 2 and all(c.is_line for c in fresh)
                m1 = {mark(nd) for nd in c_low.ray_nodes}
                m2 = {mark(nd) for nd in c_high.ray_nodes}
                if {tuple(sorted(m1)), tuple(sorted(m2))} == {(UP,), (DOWN,)}:
                    new_states = dict(states)
                # otherwise every summand dies
        else:
            # split
            parent = c_low
            assert len(fresh) == 2
            if not parent.is_line:
                assert all(not c.is_line for c in fresh)
                k1, k2 = sorted((c.key for c in fresh), key=lambda k: min(k))
                for state, coeff in states.items():
                    st = dict(state)
                    if st.pop(parent.key):
                        for ccw_first in (True, False):
                            branch = dict(st)
                            branch[k1] = ccw_first
                            branch[k2] = not ccw_first
                            emit(branch, coeff)
                    else:
                        st[k1] = False
                        st[k2] = False
                        emit(st, coeff)
            else:
                circles = [c for c in fresh if not c.is_line]
                lines = [c for c in fresh if c.is_line]
                assert len(circles) == 1 and len(lines) == 1
                for state, coeff in states.items():
                    st = dict(state)
                    st[circles[0].key] = False
                    emit(st, coeff)
        states = new_states
        if not states:
            return {}

    assert not remaining

    # Collapse the middle band: every position now carries a vertical, so
    # each component crosses both lines at the same sorted positions and
    # its crossings alternate direction along them.
    def flip(m: str) -> str:
        return UP if m == DOWN else DOWN

    result: dict[ArcDiagram, Fraction] = {}
    for state, coeff in states.items():
        st = dict(state)
        nu = [None] * len(lam)
        for c in comps:
            low_positions = sorted(p for (level, p) in c.nodes if level == 0)
            high_positions = sorted(p for (level, p) in c.nodes if level == 1)
            assert low_positions == high_positions
            if c.is_line:
                anchor, other = c.ray_nodes
                base = low_positions.index(anchor[1])
                for t, p in enumerate(low_positions):
                    nu[p] = mark(anchor) if (t - base) % 2 == 0 else flip(mark(anchor))
                assert nu[other[1]] == mark(other)
            else:
                first = DOWN if st.pop(c.key) else UP
                for t, p in enumerate(low_positions):
                    nu[p] = first if t % 2 == 0 else flip(first)
        assert not st
        product = make_arc_diagram(a.cup_weight, "".join(nu), b.cap_weight)
        add_scaled(result, product, coeff)
    return result


@lru_cache(maxsize=None)
def multiply_diagrams(
    a: ArcDiagram, b: ArcDiagram
) -> tuple[tuple[ArcDiagram, Fraction], ...]:
    """Product of two basis diagrams as a sorted tuple of (diagram, coeff).

    Zero unless the cap weight of a equals the cup weight of b.  Surgery
    pairs are resolved left to right, which is an admissible order since
    an enclosing cup always starts further left than the cups inside it.
    """
    if a.cap_weight != b.cup_weight:
        return ()
    order = cup_matching(a.cap_weight).cups
    result = _run_surgery(a, b, order)
    return tuple(sorted(result.items(), key=lambda kv: diagram_sort_key(kv[0])))


def multiply(
    x: dict[ArcDiagram, Fraction], y: dict[ArcDiagram, Fraction]
) -> dict[ArcDiagram, Fraction]:
    """Bilinear extension of the diagram product."""
    out: dict[ArcDiagram, Fraction] = {}
    for da, ca in x.items():
        for db, cb in y.items():
            for d, c in multiply_diagrams(da, db):
                add_scaled(out, d, ca * cb * c)
    return out


def diagram_json(d: ArcDiagram) -> dict:
    return {
        "cup": d.cup_weight,
        "mid": d.mid_weight,
        "cap": d.cap_weight,
        "degree": degree(d),
    }
