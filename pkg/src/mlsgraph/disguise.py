"""Disguised-instance generation with recorded ground truth.

A disguise of a graph is an isometric graph with different combinatorics:
edges are subdivided, pendant trees are glued on, and all ids (and stored
edge orientations) are shuffled.  Because the transformation is known, the
induced isomorphism of fundamental groups, its inverse, the branch-point
correspondence and the basepoint-change word can all be recorded exactly,
giving test instances where the reconstruction pipeline's output can be
checked against the truth.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .fungroup import (Basis, Hom, Word, apply_hom, cyclic_reduce_word, format_word,
                       invert_word, loop_to_word, parse_word, spanning_tree, word_to_loop)
from .graphs import (DirectedEdge, MetricGraph, attach_tree, random_tree, read_graph_comments,
                     require_valid, subdivide_edge, subdivision_chain)
from .hull import compute_core
from .paths import EdgePath, reduce_path


class DisguiseError(ValueError):
    pass


@dataclass(frozen=True)
class DisguisedInstance:
    source: MetricGraph
    graph: MetricGraph
    hom: Hom
    vertex_image: dict[int, int]
    edge_chains: dict[int, tuple[DirectedEdge, ...]]
    branch_map: dict[int, int]
    tau: Word

    def map_path(self, path: EdgePath) -> EdgePath:
        """Image of a source path under the isometric embedding."""
        return _map_path(self.graph, self.vertex_image, self.edge_chains, path)


def _map_path(g2: MetricGraph, vertex_image: dict[int, int],
              chains: dict[int, tuple[DirectedEdge, ...]], path: EdgePath) -> EdgePath:
    steps: list[DirectedEdge] = []
    for s in path.steps:
        chain = chains[s.edge]
        if s.rev:
            steps.extend(c.reverse() for c in reversed(chain))
        else:
            steps.extend(chain)
    return EdgePath(g2, vertex_image[path.start], tuple(steps))


def disguise(g: MetricGraph, seed: int) -> DisguisedInstance:
    """Produce an isometric disguise of `g` with its ground truth.

    Rejects contractible input (empty core), since the reconstruction
    hypotheses require a non-trivial fundamental group.
    """
    require_valid(g)
    core1 = compute_core(g)
    if core1.is_empty:
        raise DisguiseError("core is empty")
    rng = random.Random(seed)

    work = g
    chains: dict[int, tuple[DirectedEdge, ...]] = {
        e: (DirectedEdge(e, False),) for e in g.edge_ids}
    for eid in sorted(g.edge_ids):
        if rng.random() < 0.6:
            cuts = rng.randint(1, 2)
            numerators = sorted(rng.sample(range(1, 8), cuts))
            fractions = [Fraction(n, 8) for n in numerators]
            work_edge = chains[eid][0].edge
            chains[eid] = subdivision_chain(work, work_edge, cuts)
            work = subdivide_edge(work, work_edge, fractions)

    for _ in range(rng.randint(1, 2)):
        at = rng.choice(sorted(work.vertex_ids))
        tree = random_tree(rng, rng.randint(2, 4))
        work = attach_tree(work, at, tree, 0)

    old_v = sorted(work.vertex_ids)
    new_v = list(range(len(old_v)))
    rng.shuffle(new_v)
    vertex_map = dict(zip(old_v, new_v))
    old_e = sorted(work.edge_ids)
    new_e = list(range(len(old_e)))
    rng.shuffle(new_e)
    edge_map = dict(zip(old_e, new_e))
    flips = {e for e in old_e if rng.random() < 0.5}
    g2 = work.relabeled(vertex_map, edge_map, flips, name=f"{g.name}-d{seed}")

    chains = {
        src: tuple(DirectedEdge(edge_map[s.edge], s.rev ^ (s.edge in flips)) for s in chain)
        for src, chain in chains.items()}
    vertex_image = {v: vertex_map[v] for v in g.vertex_ids}

    basis1 = spanning_tree(g)
    basis2 = spanning_tree(g2)
    connector = basis2.tree_path(basis2.basepoint, vertex_image[basis1.basepoint])

    images = []
    for k in range(1, basis1.rank + 1):
        image_loop = _map_path(g2, vertex_image, chains, word_to_loop(basis1, (k,)))
        based = reduce_path(connector.then(image_loop).then(connector.reverse()))
        images.append(loop_to_word(basis2, based))

    inverse_images = _inverse_images(g, g2, basis1, basis2, connector, vertex_image, chains)
    hom = Hom(basis1, basis2, tuple(images), tuple(inverse_images))
    if not hom.is_certified_isomorphism():
        raise DisguiseError("internal error: recorded hom failed certification")

    branch_map = {x: vertex_image[x] for x in sorted(core1.branch_points)}
    if branch_map:
        x0 = min(branch_map)
        s1 = basis1.tree_path(x0, basis1.basepoint)
        s2 = basis2.tree_path(basis2.basepoint, vertex_image[x0])
        tau_loop = reduce_path(
            s2.then(_map_path(g2, vertex_image, chains, s1)).then(connector.reverse()))
        tau = loop_to_word(basis2, tau_loop)
    else:
        _, conj = cyclic_reduce_word(apply_hom(hom, (1,)))
        tau = invert_word(conj)
    return DisguisedInstance(g, g2, hom, vertex_image, chains, branch_map, tau)


def _inverse_images(g1: MetricGraph, g2: MetricGraph, basis1: Basis, basis2: Basis,
                    connector: EdgePath, vertex_image: dict[int, int],
                    chains: dict[int, tuple[DirectedEdge, ...]]) -> list[Word]:
    lookup: dict[int, tuple[int, int]] = {}
    for src, chain in chains.items():
        for pos, s in enumerate(chain):
            lookup[s.edge] = (src, pos)
    preimage_start = {vertex_image[v]: v for v in g1.vertex_ids}

    def pull_back(loop: EdgePath) -> EdgePath:
        steps: list[DirectedEdge] = []
        raw = loop.steps
        i = 0
        while i < len(raw):
            step = raw[i]
            if step.edge not in lookup:
                raise DisguiseError("internal error: image loop leaves the embedded graph")
            src, pos = lookup[step.edge]
            chain = chains[src]
            n = len(chain)
            if chain[pos] == step:
                if pos != 0 or raw[i:i + n] != chain:
                    raise DisguiseError("internal error: partial chain traversal")
                steps.append(DirectedEdge(src, False))
            else:
                back = tuple(c.reverse() for c in reversed(chain))
                if pos != n - 1 or raw[i:i + n] != back:
                    raise DisguiseError("internal error: partial chain traversal")
                steps.append(DirectedEdge(src, True))
            i += n
        return EdgePath(g1, preimage_start[loop.start], tuple(steps))

    out = []
    for j in range(1, basis2.rank + 1):
        lam = word_to_loop(basis2, (j,))
        based = reduce_path(connector.reverse().then(lam).then(connector))
        out.append(loop_to_word(basis1, pull_back(based)))
    return out


# -- ground-truth sidecar ----------------------------------------------

def truth_comments(inst: DisguisedInstance) -> list[str]:
    """Comment lines recording the ground truth, for the emitted graph file."""
    lines = [f"truth branch {x} {y}" for x, y in sorted(inst.branch_map.items())]
    lines.append(f"truth tau {format_word(inst.tau)}")
    return lines


def read_truth(text: str) -> tuple[dict[int, int], Word]:
    """Parse the `# truth ...` sidecar block of an emitted graph file."""
    branch_map = {}
    tau: Word = ()
    for fields in read_graph_comments(text, "truth"):
        if not fields:
            continue
        if fields[0] == "branch" and len(fields) == 3:
            branch_map[int(fields[1])] = int(fields[2])
        elif fields[0] == "tau":
            literal = " ".join(fields[1:])
            tau = () if literal == "-" else parse_word(literal)
    return branch_map, tau
