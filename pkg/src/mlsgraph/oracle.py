"""Brute-force oracles.

Deliberately naive, exponential-time ground truth for the properties the
main pipeline certifies.  Every oracle is budget-guarded and raises instead
of silently truncating; budgets default to the MLS_BUDGET environment
variable (enumeration steps, default 10^7).
"""

from __future__ import annotations

import os
from itertools import permutations

from .fungroup import Basis, Hom, Word, apply_hom, enumerate_reduced_words, marked_length
from .graphs import DirectedEdge, GraphError, MetricGraph
from .hull import compute_core
from .paths import CyclicPath


class BudgetExceededError(RuntimeError):
    """An oracle hit its enumeration budget before finishing."""


def default_budget() -> int:
    value = os.environ.get("MLS_BUDGET", "")
    try:
        return int(value)
    except ValueError:
        return 10_000_000


def enumerate_cyclic_loops(g: MetricGraph, max_edges: int,
                           budget: int | None = None) -> list[CyclicPath]:
    """All cyclically reduced cyclic loops with at most `max_edges` edges.

    Oriented classes, one canonical rotation each, in deterministic order.
    Depth-first search over non-backtracking closed walks; a walk is only
    extended with steps not below its first step, so each canonical rotation
    is generated from its least step.
    """
    found = _enumerate_loop_codes(g, max_edges, budget)
    loops = [
        CyclicPath(g, tuple(DirectedEdge(c >> 1, bool(c & 1)) for c in codes))
        for codes in found]  # codes are already canonical rotations
    loops.sort(key=lambda c: (len(c.steps), c.steps))
    return loops


def _transition_tables(g: MetricGraph):
    """Directed-edge codes (2*edge + reversed), head vertices, and
    non-backtracking successor lists."""
    all_steps = sorted({s for v in g.vertex_ids for s in g.out_steps(v)})
    code = {d: 2 * d.edge + d.rev for d in all_steps}
    head = {}
    succ = {}
    for d in all_steps:
        c = code[d]
        head[c] = g.step_head(d)
        succ[c] = tuple(code[s] for s in g.out_steps(head[c]) if s != d.reverse())
    tails = {code[d]: g.step_tail(d) for d in all_steps}
    return sorted(head), head, tails, succ


def _enumerate_loop_codes(g: MetricGraph, max_edges: int,
                          budget: int | None = None) -> set[tuple[int, ...]]:
    limit = default_budget() if budget is None else budget
    used = 0
    codes, head, tail, succ = _transition_tables(g)
    found: set[tuple[int, ...]] = set()
    base = -1

    def extend(walk: list[int], first: int) -> None:
        nonlocal used
        used += 1
        if used > limit:
            raise BudgetExceededError(f"oracle budget of {limit} steps exceeded")
        last = walk[-1]
        if head[last] == base and last != first ^ 1:
            t = tuple(walk)
            found.add(min(t[i:] + t[:i] for i in range(len(t))))
        if len(walk) == max_edges:
            return
        for step in succ[last]:
            if step >= first:
                walk.append(step)
                extend(walk, first)
                walk.pop()

    for first in codes:
        base = tail[first]
        extend([first], first)
    return found


def covering_loop_depth(g: MetricGraph, edge_ids) -> int:
    """Max over the given edges of the shortest cyclically reduced loop
    through the edge (edge count), via breadth-first search in the
    non-backtracking transition digraph.  This is the enumeration depth at
    which the loop union stabilizes on those edges."""
    codes, head, tail, succ = _transition_tables(g)
    best: dict[int, int] = {}
    for start in codes:
        # shortest closed non-backtracking walk starting with `start`; the
        # wraparound condition is the transition constraint back into it.
        target = tail[start]
        dist = {start: 1}
        frontier = [start]
        shortest = None
        while frontier and shortest is None:
            nxt = []
            for c in frontier:
                if head[c] == target and start in succ[c]:
                    shortest = dist[c]
                    break
                for s in succ[c]:
                    if s not in dist:
                        dist[s] = dist[c] + 1
                        nxt.append(s)
            frontier = nxt
        if shortest is not None:
            eid = start >> 1
            best[eid] = min(best.get(eid, shortest), shortest)
    return max((best[e] for e in edge_ids if e in best), default=0)


def brute_force_isometry(g1: MetricGraph, g2: MetricGraph):
    """Exhaustive search for an isometry between two cores.

    Returns `(vertex_map, segment_pairs)` mapping branch vertices and segment
    indices, or None if the cores are not isometric.  Inputs must already be
    their own cores; the segment-collapsed view is limited to 10 branch
    vertices.
    """
    d1, d2 = compute_core(g1), compute_core(g2)
    for g, d in ((g1, d1), (g2, d2)):
        if set(d.core.edge_ids) != set(g.edge_ids):
            raise GraphError("brute_force_isometry expects core graphs (min degree 2)")
    if len(d1.branch_points) > 10 or len(d2.branch_points) > 10:
        raise BudgetExceededError("size guard: more than 10 branch vertices")

    if not d1.branch_points and not d2.branch_points:
        if g1.total_length() == g2.total_length():
            return {}, [(0, 0)]
        return None
    if bool(d1.branch_points) != bool(d2.branch_points):
        return None
    b1, b2 = sorted(d1.branch_points), sorted(d2.branch_points)
    if len(b1) != len(b2) or len(d1.segments) != len(d2.segments):
        return None

    def signature(decomp, v):
        sig = []
        for s in decomp.segments:
            if s.x == v:
                sig.append((s.length, s.is_loop))
            if s.y == v and not s.is_loop:
                sig.append((s.length, False))
        return tuple(sorted(sig))

    sig1 = {v: signature(d1, v) for v in b1}
    sig2 = {v: signature(d2, v) for v in b2}

    def segment_key(seg, vmap=None):
        x, y = seg.x, seg.y
        if vmap is not None:
            x, y = vmap[x], vmap[y]
        return (min(x, y), max(x, y), seg.length)

    target_groups: dict[tuple, list[int]] = {}
    for j, seg in enumerate(d2.segments):
        target_groups.setdefault(segment_key(seg), []).append(j)

    for image in permutations(b2):
        vmap = dict(zip(b1, image))
        if any(sig1[v] != sig2[vmap[v]] for v in b1):
            continue
        source_groups: dict[tuple, list[int]] = {}
        for i, seg in enumerate(d1.segments):
            source_groups.setdefault(segment_key(seg, vmap), []).append(i)
        if {k: len(v) for k, v in source_groups.items()} != \
           {k: len(v) for k, v in target_groups.items()}:
            continue
        pairs = []
        for key, src in sorted(source_groups.items()):
            pairs.extend(zip(src, target_groups[key]))
        return vmap, sorted(pairs)
    return None


def spectra_agree_up_to(basis1: Basis, basis2: Basis, hom: Hom,
                        max_len: int) -> Word | None:
    """Exhaustively compare the two spectra through the hom.

    Checks l2(hom(w)) == l1(w) over all freely reduced words of length at
    most `max_len`; returns the first counterexample in enumeration order,
    or None.  Guarded to max_len <= 8 and rank <= 4.
    """
    if max_len > 8 or basis1.rank > 4:
        raise BudgetExceededError("spectra_agree_up_to guard: max_len <= 8, rank <= 4")
    for w in enumerate_reduced_words(basis1.rank, max_len):
        if marked_length(basis1, w) != marked_length(basis2, apply_hom(hom, w)):
            return w
    return None
