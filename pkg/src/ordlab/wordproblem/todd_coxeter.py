"""HLT coset enumeration over the trivial subgroup."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..presentation import Presentation, Word
from .errors import BudgetExhausted


@dataclass
class CosetTable:
    """A closed coset table.  Row 0 is the identity coset.

    ``action[c, x]`` is the coset reached from ``c`` by letter code ``x``.
    Rows are numbered in BFS order, so ``reps[c]`` is the shortlex-least word
    reaching ``c``.  Externally cosets are 1-based (``c + 1``).
    """

    presentation: Presentation
    action: np.ndarray
    reps: list[Word] = field(default_factory=list)
    closed: bool = True

    @property
    def order(self) -> int:
        return self.action.shape[0]

    def coset_of(self, w: Sequence[int]) -> int:
        c = 0
        act = self.action
        for x in w:
            c = act[c, x]
        return int(c)

    def normal_form(self, w: Sequence[int]) -> Word:
        return self.reps[self.coset_of(w)]


class _Enumerator:
    def __init__(self, n_cols: int, max_cosets: int):
        self.n_cols = n_cols
        self.max_cosets = max_cosets
        self.table: list[list[int]] = [[-1] * n_cols]
        self.parent: list[int] = [0]

    def define(self, c: int, x: int):
        if len(self.table) >= self.max_cosets:
            raise BudgetExhausted("tc_max_cosets", self.max_cosets)
        d = len(self.table)
        self.table.append([-1] * self.n_cols)
        self.parent.append(d)
        self.table[c][x] = d
        self.table[d][x ^ 1] = c

    def rep(self, c: int) -> int:
        p = self.parent
        root = c
        while p[root] != root:
            root = p[root]
        while p[c] != root:
            p[c], c = root, p[c]
        return root

    def merge(self, k: int, l: int, queue: list[int]):
        k, l = self.rep(k), self.rep(l)
        if k == l:
            return
        lo, hi = min(k, l), max(k, l)
        self.parent[hi] = lo
        queue.append(hi)

    def coincidence(self, a: int, b: int):
        table = self.table
        queue: list[int] = []
        self.merge(a, b, queue)
        i = 0
        while i < len(queue):
            e = queue[i]
            i += 1
            for x in range(self.n_cols):
                f = table[e][x]
                if f < 0:
                    continue
                table[f][x ^ 1] = -1
                e1, f1 = self.rep(e), self.rep(f)
                if table[e1][x] >= 0:
                    self.merge(f1, table[e1][x], queue)
                elif table[f1][x ^ 1] >= 0:
                    self.merge(e1, table[f1][x ^ 1], queue)
                else:
                    table[e1][x] = f1
                    table[f1][x ^ 1] = e1

    def scan_and_fill(self, c: int, w: Word):
        table = self.table
        f = b = c
        i, j = 0, len(w) - 1
        while True:
            while i <= j and table[f][w[i]] >= 0:
                f = table[f][w[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and table[b][w[j] ^ 1] >= 0:
                b = table[b][w[j] ^ 1]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                table[f][w[i]] = b
                table[b][w[i] ^ 1] = f
                return
            self.define(f, w[i])

    def alive(self, c: int) -> bool:
        return self.parent[c] == c


def todd_coxeter(p: Presentation, max_cosets: int = 100_000) -> CosetTable:
    """Enumerate cosets of the trivial subgroup.

    Raises :class:`BudgetExhausted` if more than ``max_cosets`` cosets would
    have to be defined.
    """
    if max_cosets < 1:
        raise ValueError("max_cosets must be positive")
    n_cols = p.n_letters
    en = _Enumerator(n_cols, max_cosets)
    c = 0
    while c < len(en.table):
        if en.alive(c):
            for r in p.relators:
                en.scan_and_fill(c, r)
                if not en.alive(c):
                    break
            if en.alive(c):
                for x in range(n_cols):
                    if en.table[c][x] < 0:
                        en.define(c, x)
        c += 1

    # renumber live cosets in BFS order from the identity
    table = en.table
    order = {0: 0}
    reps: list[Word] = [()]
    queue = deque([0])
    while queue:
        c = queue.popleft()
        for x in range(n_cols):
            d = en.rep(table[c][x])
            if d not in order:
                order[d] = len(reps)
                reps.append(reps[order[c]] + (x,))
                queue.append(d)
    action = np.empty((len(reps), n_cols), dtype=np.int64)
    for old, new in order.items():
        for x in range(n_cols):
            action[new, x] = order[en.rep(table[old][x])]
    return CosetTable(p, action, reps)
