"""Spanning-tree presentation of the fundamental group.

A connected graph's fundamental group is free on its non-tree edges; a
`Basis` fixes the deterministic spanning tree, the generator order, and the
basepoint.  Words are tuples of signed 1-based generator indices, written
in traversal order: the word of a loop lists the non-tree edges in the
order the loop crosses them, and concatenating loops concatenates words.

The marked length spectrum value of a word is the exact length of the
cyclically reduced loop in its free homotopy class.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator

from .graphs import DirectedEdge, GraphError, MetricGraph
from .paths import CyclicPath, EdgePath, cyclically_reduce, reduce_steps

Word = tuple[int, ...]


class WordError(ValueError):
    """Malformed word or hom input."""


# -- free group words -------------------------------------------------

def free_reduce(letters) -> Word:
    stack: list[int] = []
    for letter in letters:
        if letter == 0:
            raise WordError("0 is not a generator index")
        if stack and stack[-1] == -letter:
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


def invert_word(w: Word) -> Word:
    return tuple(-x for x in reversed(w))


def concat_words(*ws: Word) -> Word:
    out: list[int] = []
    for w in ws:
        out.extend(w)
    return free_reduce(out)


def word_power(w: Word, n: int) -> Word:
    if n < 0:
        return word_power(invert_word(w), -n)
    return concat_words(*([w] * n)) if n else ()


def cyclic_reduce_word(w: Word) -> tuple[Word, Word]:
    """Split a word as conjugator and cyclically reduced core.

    Returns `(core, conj)` with free_reduce(w) == conj + core + conj^-1.
    """
    w = free_reduce(w)
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == -w[j - 1]:
        i += 1
        j -= 1
    return w[i:j], w[:i]


def canonical_cyclic_word(w: Word) -> Word:
    """Canonical conjugacy-class representative: cyclically reduce, then take
    the lexicographically least rotation."""
    core, _ = cyclic_reduce_word(w)
    if not core:
        return ()
    return min(core[i:] + core[:i] for i in range(len(core)))


def parse_word(text: str) -> Word:
    """Parse the word literal syntax: whitespace-separated `g<k>` / `g<k>^-1`."""
    letters = []
    for token in text.split():
        rev = token.endswith("^-1")
        body = token[:-3] if rev else token
        if not body.startswith("g"):
            raise WordError(f"bad word token {token!r}")
        try:
            k = int(body[1:])
        except ValueError:
            raise WordError(f"bad word token {token!r}") from None
        if k <= 0:
            raise WordError(f"generator index must be positive in {token!r}")
        letters.append(-k if rev else k)
    return free_reduce(letters)


def format_word(w: Word) -> str:
    if not w:
        return "-"
    return " ".join(f"g{x}" if x > 0 else f"g{-x}^-1" for x in w)


def enumerate_reduced_words(rank: int, max_len: int) -> Iterator[Word]:
    """All freely reduced non-empty words of length <= max_len, in a fixed
    order: by length, then lexicographically over the alphabet
    g1, g1^-1, g2, g2^-1, ..."""
    alphabet = [s * k for k in range(1, rank + 1) for s in (1, -1)]

    def extend(prefix: list[int], remaining: int) -> Iterator[Word]:
        if remaining == 0:
            yield tuple(prefix)
            return
        for letter in alphabet:
            if prefix and prefix[-1] == -letter:
                continue
            prefix.append(letter)
            yield from extend(prefix, remaining - 1)
            prefix.pop()

    for n in range(1, max_len + 1):
        yield from extend([], n)


# -- spanning-tree basis ----------------------------------------------

@dataclass(frozen=True)
class Basis:
    """Spanning tree plus ordered non-tree generators and a basepoint."""

    graph: MetricGraph
    tree_edges: frozenset[int]
    generators: tuple[int, ...]
    basepoint: int
    _parent: dict[int, tuple[int, DirectedEdge] | None] = field(
        repr=False, compare=False, default_factory=dict)
    _gen_blocks: dict[int, tuple[DirectedEdge, ...]] = field(
        repr=False, compare=False, default_factory=dict)

    @property
    def rank(self) -> int:
        return len(self.generators)

    def __post_init__(self) -> None:
        # Parent pointers toward the basepoint, along tree edges only.
        parent: dict[int, tuple[int, DirectedEdge] | None] = {self.basepoint: None}
        frontier = [self.basepoint]
        g = self.graph
        while frontier:
            nxt = []
            for v in frontier:
                for step in g.out_steps(v):
                    if step.edge not in self.tree_edges:
                        continue
                    w = g.step_head(step)
                    if w not in parent:
                        parent[w] = (v, step)
                        nxt.append(w)
            frontier = nxt
        if set(parent) != set(g.vertex_ids):
            raise GraphError("tree edges do not span the graph")
        object.__setattr__(self, "_parent", parent)
        blocks = {}
        for idx, eid in enumerate(self.generators, start=1):
            rec = g.edge(eid)
            steps = (self.tree_path(self.basepoint, rec.u).steps
                     + (DirectedEdge(eid, False),)
                     + self.tree_path(rec.v, self.basepoint).steps)
            blocks[idx] = tuple(reduce_steps(steps))
            blocks[-idx] = tuple(s.reverse() for s in reversed(blocks[idx]))
        object.__setattr__(self, "_gen_blocks", blocks)

    def _root_steps(self, v: int) -> list[DirectedEdge]:
        steps = []
        while True:
            link = self._parent[v]
            if link is None:
                return steps
            v, step = link
            steps.append(step.reverse())

    def tree_path(self, a: int, b: int) -> EdgePath:
        """The unique reduced path from a to b inside the spanning tree."""
        up = self._root_steps(a)
        down = self._root_steps(b)
        while up and down and up[-1] == down[-1]:
            up.pop()
            down.pop()
        steps = up + [s.reverse() for s in reversed(down)]
        return EdgePath(self.graph, a, tuple(steps))


def spanning_tree(g: MetricGraph) -> Basis:
    """Deterministic basis: breadth-first tree from the least vertex id,
    scanning incident edges by least id; generators are the non-tree edges
    in id order, the basepoint is the least vertex id."""
    if not g.vertex_ids:
        raise GraphError("empty graph has no basis")
    if not g.is_connected():
        raise GraphError("disconnected")
    basepoint = min(g.vertex_ids)
    tree: set[int] = set()
    seen = {basepoint}
    frontier = [basepoint]
    while frontier:
        nxt = []
        for v in frontier:
            for step in g.out_steps(v):
                w = g.step_head(step)
                if w not in seen:
                    seen.add(w)
                    tree.add(step.edge)
                    nxt.append(w)
        frontier = nxt
    generators = tuple(sorted(g.edge_ids - tree))
    return Basis(g, frozenset(tree), generators, basepoint)


# -- words <-> loops --------------------------------------------------

def word_to_loop(basis: Basis, w: Word) -> EdgePath:
    """Reduced based loop at the basepoint realizing the word.

    Each generator crossing contributes tree path out, the generator edge,
    and tree path back.
    """
    steps: list[DirectedEdge] = []
    for letter in w:
        if letter == 0 or abs(letter) > basis.rank:
            raise WordError(f"generator index {letter} out of range")
        block = basis._gen_blocks[letter]
        for step in block:
            if steps and steps[-1] == step.reverse():
                steps.pop()
            else:
                steps.append(step)
    return EdgePath(basis.graph, basis.basepoint, tuple(steps))


def loop_to_word(basis: Basis, loop: EdgePath) -> Word:
    """Freely reduced word reading off the non-tree edges a based loop crosses."""
    if loop.start != basis.basepoint or not loop.is_closed():
        raise WordError("loop is not based at the basis basepoint")
    index = {eid: i for i, eid in enumerate(basis.generators, start=1)}
    letters = []
    for step in loop.steps:
        idx = index.get(step.edge)
        if idx is not None:
            letters.append(-idx if step.rev else idx)
    return free_reduce(letters)


def loop_class_word(basis: Basis, loop: EdgePath) -> Word:
    """Word of a based loop anywhere in the graph, transported to the
    basepoint along the spanning tree."""
    if not loop.is_closed():
        raise WordError("not a loop")
    t = basis.tree_path(basis.basepoint, loop.start)
    return loop_to_word(basis, t.then(loop).then(t.reverse()))


def marked_length(basis: Basis, w: Word) -> Fraction:
    """Length of the cyclically reduced loop freely homotopic to the word's
    loop; zero iff the word is the identity."""
    core, _ = cyclically_reduce(word_to_loop(basis, w))
    if core is None:
        return Fraction(0)
    return core.length


def word_cyclic_core(basis: Basis, w: Word) -> CyclicPath | None:
    core, _ = cyclically_reduce(word_to_loop(basis, w))
    return core


def spectrum_table(basis: Basis, max_len: int) -> list[tuple[Word, Fraction]]:
    """One row per conjugacy class of freely reduced words of length <= max_len.

    Keys are canonical cyclic words; rows are sorted by (word length, word).
    """
    if max_len < 1:
        raise WordError("max_len must be at least 1")
    rows: dict[Word, Fraction] = {}
    for w in enumerate_reduced_words(basis.rank, max_len):
        key = canonical_cyclic_word(w)
        if key and key not in rows:
            rows[key] = marked_length(basis, key)
    return sorted(rows.items(), key=lambda kv: (len(kv[0]), kv[0]))


def format_spectrum_table(rows: list[tuple[Word, Fraction]]) -> str:
    from .graphs import format_length
    lines = [f"{format_word(w)}\t{format_length(value)}" for w, value in rows]
    return "\n".join(lines) + ("\n" if lines else "")


# -- homomorphisms ----------------------------------------------------

@dataclass(frozen=True)
class Hom:
    """Free-group homomorphism given by generator images.

    The isomorphism property is certified only when explicit inverse images
    are supplied and both compositions reduce to the identity on generators.
    """

    source: Basis
    target: Basis
    images: tuple[Word, ...]
    inverse_images: tuple[Word, ...] | None = None

    def __post_init__(self) -> None:
        if len(self.images) != self.source.rank:
            raise WordError("one image word is required per source generator")
        for w in self.images:
            for letter in w:
                if abs(letter) > self.target.rank or letter == 0:
                    raise WordError(f"image letter {letter} out of target range")
        if self.inverse_images is not None:
            if len(self.inverse_images) != self.target.rank:
                raise WordError("one inverse image word is required per target generator")
            for w in self.inverse_images:
                for letter in w:
                    if abs(letter) > self.source.rank or letter == 0:
                        raise WordError(f"inverse image letter {letter} out of source range")

    def inverse(self) -> "Hom":
        if self.inverse_images is None:
            raise WordError("hom carries no inverse")
        return Hom(self.target, self.source, self.inverse_images, self.images)

    def is_certified_isomorphism(self) -> bool:
        if self.inverse_images is None:
            return False
        inv = self.inverse()
        for k in range(1, self.source.rank + 1):
            if apply_hom(inv, apply_hom(self, (k,))) != (k,):
                return False
        for k in range(1, self.target.rank + 1):
            if apply_hom(self, apply_hom(inv, (k,))) != (k,):
                return False
        return True


def apply_hom(h: Hom, w: Word) -> Word:
    """Substitute generator images and freely reduce."""
    pieces = []
    for letter in w:
        if letter == 0 or abs(letter) > h.source.rank:
            raise WordError(f"letter {letter} outside the source basis")
        img = h.images[abs(letter) - 1]
        pieces.append(img if letter > 0 else invert_word(img))
    return concat_words(*pieces)


def identity_hom(basis: Basis) -> Hom:
    gens = tuple((k,) for k in range(1, basis.rank + 1))
    return Hom(basis, basis, gens, gens)


def spectrum_function(basis: Basis) -> Callable[[Word], Fraction]:
    return lambda w: marked_length(basis, w)


# -- hom file format --------------------------------------------------

def write_hom(h: Hom, name: str = "phi") -> str:
    lines = [f"hom {name}"]
    for k, w in enumerate(h.images, start=1):
        lines.append(f"gen g{k} = {format_word(w)}")
    if h.inverse_images is not None:
        lines.append("inverse")
        for k, w in enumerate(h.inverse_images, start=1):
            lines.append(f"gen g{k} = {format_word(w)}")
    return "\n".join(lines) + "\n"


def read_hom(text: str, source: Basis, target: Basis) -> Hom:
    """Parse the hom file format against the given bases.

    Expects `gen g<k> = <word>` lines in index order, with an optional
    `inverse` section in target-generator order.
    """
    images: list[Word] = []
    inverse_images: list[Word] | None = None
    current = images
    saw_header = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("hom"):
            saw_header = True
            continue
        if line == "inverse":
            inverse_images = []
            current = inverse_images
            continue
        if not line.startswith("gen "):
            raise WordError(f"line {lineno}: unknown directive")
        head, _, body = line.partition("=")
        fields = head.split()
        if len(fields) != 2 or not fields[1].startswith("g"):
            raise WordError(f"line {lineno}: malformed gen line")
        k = int(fields[1][1:])
        if k != len(current) + 1:
            raise WordError(f"line {lineno}: generators must appear in index order")
        word_text = body.strip()
        current.append(() if word_text == "-" else parse_word(word_text))
    if not saw_header:
        raise WordError("missing hom header")
    return Hom(source, target, tuple(images),
               None if inverse_images is None else tuple(inverse_images))
