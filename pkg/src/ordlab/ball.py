"""Cayley balls B_k(G) with their in-ball product and conjugation triples."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from . import kernels
from .presentation import Word, invert, shortlex_key
from .wordproblem import BudgetExhausted, WordBackend

DEFAULT_BALL_CAP = 100_000
DEFAULT_HALO_CAP = 4_000_000


class BallCapExceeded(BudgetExhausted):
    pass


class BallElement(NamedTuple):
    id: int
    nf: Word
    length: int
    inverse_id: int


@dataclass
class Ball:
    radius: int
    backend: WordBackend
    elements: list[BallElement]
    product_triples: np.ndarray
    conj_triples: np.ndarray
    geodesics: list[Word] = field(repr=False, default_factory=list)

    def __post_init__(self):
        self.index: dict[Word, int] = {e.nf: e.id for e in self.elements}
        self.inverse = np.array([e.inverse_id for e in self.elements], dtype=np.int64)
        self.lengths = np.array([e.length for e in self.elements], dtype=np.int64)

    def __len__(self):
        return len(self.elements)

    @property
    def presentation(self):
        return self.backend.presentation

    @property
    def involutions(self) -> list[int]:
        return [e.id for e in self.elements if e.id != 0 and e.inverse_id == e.id]

    @property
    def pairs(self) -> list[tuple[int, int]]:
        """Inverse pairs ``(rep, inverse)`` with ``rep`` the smaller id, involutions excluded."""
        return [(e.id, e.inverse_id) for e in self.elements if 0 < e.id < e.inverse_id]

    def lookup(self, w: Sequence[int]) -> int | None:
        """Id of the element represented by ``w``, or None if outside the ball."""
        return self.index.get(self.backend.normal_form(w))

    def name(self, i: int) -> str:
        return self.presentation.format_word(self.elements[i].nf)

    def size_at(self, k: int) -> int:
        """Number of elements of length at most ``k`` (a prefix of the id range)."""
        return int(np.searchsorted(self.lengths, k, side="right"))

    def to_json(self) -> dict:
        return {
            "radius": self.radius,
            "backend": self.backend.kind,
            "size": len(self),
            "elements": [
                {"id": e.id, "nf": self.name(e.id), "length": e.length, "inverse": e.inverse_id}
                for e in self.elements
            ],
            "involutions": [self.name(i) for i in self.involutions],
            "product_triples": int(self.product_triples.shape[0]),
            "conj_triples": int(self.conj_triples.shape[0]),
        }


def _bfs(backend: WordBackend, radius: int, cap: int, cap_name: str):
    """BFS over right multiplication up to ``radius`` layers.

    Returns (nfs, layers, table, parent, via) with ids ordered by layer and
    then shortlex of the normal form.  ``table[i, x]`` is -1 for elements of
    the outermost layer.
    """
    n_letters = backend.presentation.n_letters
    nfs: list[Word] = [()]
    layers = [0]
    parent = [-1]
    via = [-1]
    index = {(): 0}
    rows: list[list[int]] = []
    frontier = [0]
    for layer in range(1, radius + 1):
        found: dict[Word, tuple[int, int]] = {}
        for i in frontier:
            row = []
            base = nfs[i]
            for x in range(n_letters):
                nf = backend.normal_form(base + (x,))
                j = index.get(nf)
                if j is None:
                    # new element; resolved to an id once the layer is sorted
                    found.setdefault(nf, (i, x))
                    row.append(nf)
                else:
                    row.append(j)
            rows.append(row)
        if not found:
            frontier = []
            break
        new = sorted(found, key=shortlex_key)
        if len(nfs) + len(new) > cap:
            raise (BallCapExceeded if cap_name == "ball_cap" else BudgetExhausted)(cap_name, cap)
        for nf in new:
            index[nf] = len(nfs)
            nfs.append(nf)
            layers.append(layer)
            parent.append(found[nf][0])
            via.append(found[nf][1])
        frontier = list(range(len(nfs) - len(new), len(nfs)))
    table = np.full((len(nfs), n_letters), -1, dtype=np.int64)
    for i, row in enumerate(rows):
        table[i] = [index[j] if isinstance(j, tuple) else j for j in row]
    return nfs, layers, table, parent, via, index


def build_ball(backend: WordBackend, k: int, cap: int = DEFAULT_BALL_CAP,
               halo_cap: int = DEFAULT_HALO_CAP) -> Ball:
    """Build B_k with product and conjugation triples.

    Products of two length-k elements have length at most 2k, so the BFS is
    carried to radius 2k and products are read off by walking the table.
    """
    if k < 1:
        raise ValueError("radius must be at least 1")
    nfs, layers, table, parent, via, index = _bfs(backend, 2 * k, max(cap, halo_cap), "halo_cap")
    n = int(np.searchsorted(np.asarray(layers), k, side="right"))
    if n > cap:
        raise BallCapExceeded("ball_cap", cap)

    geodesics: list[Word] = [()]
    for i in range(1, n):
        geodesics.append(geodesics[parent[i]] + (via[i],))
    width = max(1, k)
    words = np.zeros((n, width), dtype=np.int64)
    lengths = np.zeros(n, dtype=np.int64)
    for i, w in enumerate(geodesics):
        words[i, :len(w)] = w
        lengths[i] = len(w)

    M = kernels.product_matrix(table, words, lengths)
    elements = []
    for i in range(n):
        inv = index[backend.normal_form(invert(nfs[i]))]
        elements.append(BallElement(i, nfs[i], layers[i], inv))
    return Ball(
        radius=k,
        backend=backend,
        elements=elements,
        product_triples=kernels.product_triples(M, n),
        conj_triples=kernels.conjugation_triples(M, n),
        geodesics=geodesics,
    )


def product_table(ball: Ball) -> list[tuple[int, int, int]]:
    return [tuple(int(v) for v in t) for t in ball.product_triples]


def conjugation_table(ball: Ball) -> list[tuple[int, int, int]]:
    return [tuple(int(v) for v in t) for t in ball.conj_triples]
