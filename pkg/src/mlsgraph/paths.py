"""Reduced and cyclically reduced edge-path calculus.

An edge path is a chained sequence of directed edges with an explicit start
vertex (so the empty, constant path is representable).  A path is reduced
when no step is immediately undone by its reverse; every path reduces to a
unique reduced path in its endpoint-fixed homotopy class, computed here by
a single stack scan.  Cyclic paths represent free homotopy classes and are
stored in a canonical rotation.

Concatenation helpers take their arguments in traversal order throughout.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .graphs import DirectedEdge, GraphError, MetricGraph


class PathError(ValueError):
    """Malformed path input or a path operation precondition violation."""


@dataclass(frozen=True)
class EdgePath:
    """A based path: start vertex plus chained directed edges."""

    graph: MetricGraph
    start: int
    steps: tuple[DirectedEdge, ...] = ()

    def __post_init__(self) -> None:
        g = self.graph
        if not g.has_vertex(self.start):
            raise PathError(f"unknown start vertex {self.start}")
        at = self.start
        for step in self.steps:
            if g.step_tail(step) != at:
                raise PathError(f"steps do not chain at vertex {at} ({step})")
            at = g.step_head(step)

    @property
    def end(self) -> int:
        if not self.steps:
            return self.start
        return self.graph.step_head(self.steps[-1])

    @property
    def length(self) -> Fraction:
        g = self.graph
        return Fraction(sum(g.scaled_length(s.edge) for s in self.steps), g.length_scale)

    def is_empty(self) -> bool:
        return not self.steps

    def is_closed(self) -> bool:
        return self.end == self.start

    def reverse(self) -> "EdgePath":
        return EdgePath(self.graph, self.end, _reversed_steps(self.steps))

    def then(self, other: "EdgePath") -> "EdgePath":
        """Concatenation in traversal order: self first, then other."""
        if other.graph is not self.graph:
            raise PathError("paths live on different graphs")
        if other.start != self.end:
            raise PathError("concatenation endpoints do not chain")
        return EdgePath(self.graph, self.start, self.steps + other.steps)

    def support(self) -> frozenset[int]:
        return frozenset(s.edge for s in self.steps)

    def vertices(self) -> tuple[int, ...]:
        out = [self.start]
        for step in self.steps:
            out.append(self.graph.step_head(step))
        return tuple(out)

    def __len__(self) -> int:
        return len(self.steps)

    def __repr__(self) -> str:
        return f"EdgePath({self.start}: {format_path(self)!r})"


def _reversed_steps(steps: Sequence[DirectedEdge]) -> tuple[DirectedEdge, ...]:
    return tuple(s.reverse() for s in reversed(steps))


@dataclass(frozen=True)
class CyclicPath:
    """A cyclically chained edge sequence considered up to rotation.

    The stored tuple is the canonical representative: the rotation whose
    directed-edge sequence is lexicographically least.
    """

    graph: MetricGraph
    steps: tuple[DirectedEdge, ...]

    @staticmethod
    def from_steps(graph: MetricGraph, steps: Iterable[DirectedEdge]) -> "CyclicPath":
        steps = tuple(steps)
        if not steps:
            raise PathError("a cyclic path needs at least one edge")
        for step, nxt in zip(steps, steps[1:] + steps[:1]):
            if graph.step_head(step) != graph.step_tail(nxt):
                raise PathError("cyclic steps do not chain")
        return CyclicPath(graph, min(_rotations(steps)))

    @property
    def length(self) -> Fraction:
        g = self.graph
        return Fraction(sum(g.scaled_length(s.edge) for s in self.steps), g.length_scale)

    def support(self) -> frozenset[int]:
        return frozenset(s.edge for s in self.steps)

    def reverse(self) -> "CyclicPath":
        return CyclicPath.from_steps(self.graph, _reversed_steps(self.steps))

    def based_at(self, vertex: int) -> EdgePath:
        """The lexicographically least rotation starting at `vertex`, as a based loop."""
        best = None
        for rot in _rotations(self.steps):
            if self.graph.step_tail(rot[0]) == vertex and (best is None or rot < best):
                best = rot
        if best is None:
            raise PathError(f"cyclic path does not pass through vertex {vertex}")
        return EdgePath(self.graph, vertex, best)

    def __len__(self) -> int:
        return len(self.steps)

    def __repr__(self) -> str:
        return f"CyclicPath({' '.join(map(str, self.steps))})"


def _rotations(steps: tuple[DirectedEdge, ...]) -> list[tuple[DirectedEdge, ...]]:
    return [steps[i:] + steps[:i] for i in range(len(steps))]


# -- reduction --------------------------------------------------------

def is_reduced(p: EdgePath) -> bool:
    """True iff no step is immediately followed by its reverse."""
    return all(nxt != step.reverse() for step, nxt in zip(p.steps, p.steps[1:]))


def reduce_steps(steps: Iterable[DirectedEdge]) -> list[DirectedEdge]:
    stack: list[DirectedEdge] = []
    for step in steps:
        if stack and stack[-1] == step.reverse():
            stack.pop()
        else:
            stack.append(step)
    return stack


def reduce_path(p: EdgePath) -> EdgePath:
    """The unique reduced path homotopic to `p` rel endpoints.

    Adjacent cancellation is confluent, so a single left-to-right stack scan
    reaches the normal form; the output traverses a subset of `p`'s edges.
    """
    return EdgePath(p.graph, p.start, tuple(reduce_steps(p.steps)))


def cyclic_reduce_based(loop: EdgePath) -> tuple[EdgePath, EdgePath]:
    """Split a based loop as conjugator + cyclically reduced core.

    Returns `(core, conjugator)` where `core` is a based loop at the
    conjugator's endpoint and `reduce_path(loop)` equals
    conjugator + core + reverse(conjugator) in traversal order.  The core
    is empty iff the loop is nullhomotopic.
    """
    if not loop.is_closed():
        raise PathError("not a loop: endpoints differ")
    steps = reduce_steps(loop.steps)
    peeled: list[DirectedEdge] = []
    while len(steps) >= 2 and steps[-1] == steps[0].reverse():
        peeled.append(steps[0])
        steps = steps[1:-1]
    conjugator = EdgePath(loop.graph, loop.start, tuple(peeled))
    core = EdgePath(loop.graph, conjugator.end, tuple(steps))
    return core, conjugator


def cyclically_reduce(loop: EdgePath) -> tuple[CyclicPath | None, EdgePath]:
    """Cyclically reduced core of a based loop, as a canonical cyclic path.

    Returns `(core, conjugator)`; the core is None for a nullhomotopic loop.
    """
    based, conjugator = cyclic_reduce_based(loop)
    if based.is_empty():
        return None, conjugator
    return CyclicPath.from_steps(loop.graph, based.steps), conjugator


@dataclass(frozen=True)
class ConcatDecomposition:
    """Cancellation decomposition of a two-path concatenation.

    With all concatenations read in traversal order: p1 = q1 + r,
    p2 = reverse(r) + q2, and q1 + q2 is the reduced form of p1 + p2.
    """

    q1: EdgePath
    q2: EdgePath
    r: EdgePath


def concat_reduce(p1: EdgePath, p2: EdgePath) -> ConcatDecomposition:
    """Maximal cancellation between a reduced path and a reduced successor."""
    if not is_reduced(p1) or not is_reduced(p2):
        raise PathError("concat_reduce expects reduced inputs")
    if p1.end != p2.start:
        raise PathError("paths are not incident")
    n1, n2 = len(p1.steps), len(p2.steps)
    k = 0
    while k < n1 and k < n2 and p2.steps[k] == p1.steps[n1 - 1 - k].reverse():
        k += 1
    q1 = EdgePath(p1.graph, p1.start, p1.steps[: n1 - k])
    r = EdgePath(p1.graph, q1.end, p1.steps[n1 - k:])
    q2 = EdgePath(p2.graph, q1.end, p2.steps[k:])
    return ConcatDecomposition(q1, q2, r)


def path_length(p: EdgePath | CyclicPath) -> Fraction:
    """Exact sum of the constituent edge lengths."""
    return p.length


def path_loop_path_normal_form(p: EdgePath, loop: CyclicPath) -> EdgePath:
    """Reduced based loop homotopic to: traverse `p`, the loop, then `p` back.

    The loop must be cyclically reduced and pass through `p`'s endpoint.  The
    result always visits that vertex again, and when `p` never revisits its
    own endpoint it starts with `p` or ends with its reverse (both asserted).
    """
    if len(loop) == 0:
        raise PathError("conjugated loop is empty")
    if not is_reduced(p):
        raise PathError("conjugating path must be reduced")
    based = loop.based_at(p.end)
    first, last = based.steps[0], based.steps[-1]
    if last == first.reverse() and len(based.steps) >= 2:
        raise PathError("loop is not cyclically reduced")
    result = reduce_path(p.then(based).then(p.reverse()))
    assert p.end in result.vertices(), "normal form lost the conjugation point"
    n = len(p.steps)
    if n and p.end not in p.vertices()[:-1]:  # non-self-terminating path
        assert result.steps[:n] == p.steps or \
            result.steps[-n:] == p.reverse().steps, \
            "normal form neither starts with the path nor ends with its reverse"
    return result


def cyclic_equal(c1: CyclicPath, c2: CyclicPath) -> bool:
    """True iff c2 is a rotation of c1 (orientation preserving)."""
    if c1.graph is not c2.graph:
        raise PathError("cyclic paths live on different graphs")
    return c1.steps == c2.steps


def cyclic_equal_unoriented(c1: CyclicPath, c2: CyclicPath) -> bool:
    """True iff c2 is a rotation of c1 or of its reversal."""
    return cyclic_equal(c1, c2) or cyclic_equal(c1.reverse(), c2)


# -- shortest paths ---------------------------------------------------

def shortest_path(g: MetricGraph, u: int, v: int) -> EdgePath:
    """A distance minimizer from u to v.

    Among equal-length paths the one with lexicographically least directed
    edge sequence is returned, so the output is deterministic; it is always
    reduced (a minimizer cannot backtrack).
    """
    if not g.has_vertex(u):
        raise GraphError(f"unknown vertex id {u}")
    if not g.has_vertex(v):
        raise GraphError(f"unknown vertex id {v}")
    best: dict[int, tuple[int, tuple[DirectedEdge, ...]]] = {u: (0, ())}
    heap: list[tuple[int, tuple[DirectedEdge, ...], int]] = [(0, (), u)]
    settled: set[int] = set()
    while heap:
        dist, steps, x = heapq.heappop(heap)
        if x in settled:
            continue
        settled.add(x)
        if x == v:
            return EdgePath(g, u, steps)
        for step in g.out_steps(x):
            w = g.step_head(step)
            if w in settled:
                continue
            cand = (dist + g.scaled_length(step.edge), steps + (step,))
            if w not in best or cand < best[w]:
                best[w] = cand
                heapq.heappush(heap, (cand[0], cand[1], w))
    raise GraphError(f"vertex {v} is unreachable from {u}")


def graph_distance(g: MetricGraph, u: int, v: int) -> Fraction:
    return shortest_path(g, u, v).length


# -- literals ---------------------------------------------------------

def parse_path(g: MetricGraph, text: str, at: int | None = None) -> EdgePath:
    """Parse the path literal syntax: whitespace-separated `e<id>` / `e<id>^-1`.

    An empty literal needs the explicit base vertex `at`.
    """
    steps = []
    for token in text.split():
        rev = token.endswith("^-1")
        body = token[:-3] if rev else token
        if not body.startswith("e"):
            raise PathError(f"bad path token {token!r}")
        try:
            eid = int(body[1:])
        except ValueError:
            raise PathError(f"bad path token {token!r}") from None
        steps.append(DirectedEdge(eid, rev))
    if not steps:
        if at is None:
            raise PathError("empty path literal needs an explicit base vertex")
        return EdgePath(g, at, ())
    start = g.step_tail(steps[0])
    if at is not None and at != start:
        raise PathError(f"path starts at {start}, not {at}")
    return EdgePath(g, start, tuple(steps))


def format_path(p: EdgePath | CyclicPath) -> str:
    return " ".join(str(s) for s in p.steps)
