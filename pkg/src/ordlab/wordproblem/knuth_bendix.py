"""Shortlex Knuth-Bendix completion for group presentations.

Words are tuples of letter codes (see :mod:`ordlab.presentation`).  The
free-cancellation rules ``x X -> e`` are kept inside the system so that
their critical pairs get resolved like any other, but they are not reported
in :attr:`RewritingSystem.rules`.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence

from ..presentation import Presentation, Word, free_reduce, shortlex_key
from .errors import BudgetExhausted


class RewriteRule(NamedTuple):
    lhs: Word
    rhs: Word


def orient(a: Word, b: Word) -> RewriteRule:
    return RewriteRule(a, b) if shortlex_key(a) > shortlex_key(b) else RewriteRule(b, a)


def _contains(word: Word, factor: Word) -> bool:
    n, m = len(word), len(factor)
    if m > n:
        return False
    first = factor[0]
    for i in range(n - m + 1):
        if word[i] == first and word[i:i + m] == factor:
            return True
    return False


def _overlaps(l1: Word, r1: Word, l2: Word, r2: Word) -> Iterator[tuple[Word, Word, Word]]:
    """Proper overlaps where a suffix of l1 is a prefix of l2.

    Yields (overlap word, one reduction, other reduction).
    """
    for t in range(1, min(len(l1), len(l2))):
        if l1[-t:] == l2[:t]:
            yield l1 + l2[t:], r1 + l2[t:], l1[:-t] + r2


@dataclass
class RewritingSystem:
    presentation: Presentation
    table: dict[Word, Word]
    confluent: bool = False

    def __post_init__(self):
        self._lengths = sorted({len(k) for k in self.table})

    @property
    def rules(self) -> list[RewriteRule]:
        """Rules other than free cancellation, in shortlex order of lhs."""
        out = [RewriteRule(l, r) for l, r in self.table.items() if not (len(l) == 2 and l[0] == l[1] ^ 1 and not r)]
        out.sort(key=lambda rr: shortlex_key(rr.lhs))
        return out

    def reduce(self, w: Sequence[int]) -> Word:
        table = self.table
        lengths = self._lengths
        out: list[int] = []
        pending = list(reversed(w))
        while pending:
            out.append(pending.pop())
            n = len(out)
            for L in lengths:
                if L > n:
                    break
                rhs = table.get(tuple(out[n - L:]))
                if rhs is not None:
                    del out[n - L:]
                    pending.extend(reversed(rhs))
                    break
        return tuple(out)

    normal_form = reduce

    def critical_pairs(self) -> Iterator[tuple[Word, Word, Word]]:
        """Every proper-overlap and inclusion critical pair of the system."""
        by_prefix: dict[Word, list[Word]] = {}
        for l2 in self.table:
            for t in range(1, len(l2)):
                by_prefix.setdefault(l2[:t], []).append(l2)
        for l1, r1 in self.table.items():
            for t in range(1, len(l1)):
                for l2 in by_prefix.get(l1[-t:], ()):
                    if t < len(l2):
                        yield l1 + l2[t:], r1 + l2[t:], l1[:-t] + self.table[l2]
            for l2, r2 in self.table.items():
                if l2 != l1 and _contains(l1, l2):
                    i = next(i for i in range(len(l1)) if l1[i:i + len(l2)] == l2)
                    yield l1, r1, l1[:i] + r2 + l1[i + len(l2):]

    def unresolved_pairs(self) -> list[tuple[Word, Word, Word]]:
        return [(w, a, b) for w, a, b in self.critical_pairs() if self.reduce(a) != self.reduce(b)]


def knuth_bendix(p: Presentation, max_rules: int = 2000, max_len: int = 50) -> RewritingSystem:
    """Complete ``p`` to a confluent shortlex rewriting system.

    Raises :class:`BudgetExhausted` when the rule count exceeds ``max_rules``
    or a rule longer than ``max_len`` would be needed.
    """
    if max_rules < 1 or max_len < 1:
        raise ValueError("budgets must be positive")
    n_letters = p.n_letters
    system = RewritingSystem(p, {(c, c ^ 1): () for c in range(n_letters)})
    n_trivial = n_letters
    table = system.table

    counter = itertools.count()
    pending: list = []

    def push(key: Word, a: Word, b: Word):
        heapq.heappush(pending, (shortlex_key(key), next(counter), a, b))

    def add_rule(lhs: Word, rhs: Word):
        table[lhs] = rhs
        system._lengths = sorted({len(k) for k in table})
        for l, r in list(table.items()):
            if l == lhs:
                continue
            if _contains(l, lhs):
                del table[l]
                push(l, l, r)
            elif _contains(r, lhs):
                table[l] = system.reduce(r)
        system._lengths = sorted({len(k) for k in table})
        for l, r in list(table.items()):
            for w, a, b in _overlaps(lhs, rhs, l, r):
                push(w, a, b)
            if l != lhs:
                for w, a, b in _overlaps(l, r, lhs, rhs):
                    push(w, a, b)

    for rel in p.relators:
        push(rel, free_reduce(rel), ())
    for c in range(n_letters):
        for w, a, b in _overlaps((c, c ^ 1), (), (c ^ 1, c), ()):
            push(w, a, b)

    while True:
        while pending:
            _, _, a, b = heapq.heappop(pending)
            a, b = system.reduce(a), system.reduce(b)
            if a == b:
                continue
            rule = orient(a, b)
            if len(rule.lhs) > max_len:
                raise BudgetExhausted("kb_max_len", max_len)
            add_rule(*rule)
            if len(table) - n_trivial > max_rules:
                raise BudgetExhausted("kb_max_rules", max_rules)
        leftover = system.unresolved_pairs()
        if not leftover:
            break
        for w, a, b in leftover:
            push(w, a, b)

    system.confluent = True
    return system
