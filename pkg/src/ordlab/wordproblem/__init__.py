"""Decided word problems: normal forms from completion or coset enumeration."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence, Union

from ..presentation import Presentation, Word
from .errors import BudgetExhausted, WordProblemUndecided
from .knuth_bendix import RewriteRule, RewritingSystem, knuth_bendix
from .todd_coxeter import CosetTable, todd_coxeter

__all__ = [
    "BudgetExhausted",
    "WordProblemUndecided",
    "RewriteRule",
    "RewritingSystem",
    "CosetTable",
    "WordBackend",
    "Budgets",
    "knuth_bendix",
    "todd_coxeter",
    "normal_form",
    "equal",
    "get_backend",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Budgets:
    kb_max_rules: int = 2000
    kb_max_len: int = 50
    tc_max_cosets: int = 100_000


class WordBackend:
    """Normal forms for one presentation, backed by a confluent rewriting
    system or a closed coset table."""

    def __init__(self, engine: Union[RewritingSystem, CosetTable]):
        if isinstance(engine, RewritingSystem) and not engine.confluent:
            raise ValueError("rewriting system is not confluent")
        if isinstance(engine, CosetTable) and not engine.closed:
            raise ValueError("coset table is not closed")
        self.engine = engine
        self.presentation: Presentation = engine.presentation
        self._cache: dict[Word, Word] = {}

    @property
    def kind(self) -> str:
        return "knuth-bendix" if isinstance(self.engine, RewritingSystem) else "todd-coxeter"

    def normal_form(self, w: Sequence[int]) -> Word:
        w = tuple(w)
        nf = self._cache.get(w)
        if nf is None:
            nf = self.engine.normal_form(w)
            if len(self._cache) < 1_000_000:
                self._cache[w] = nf
        return nf

    def equal(self, u: Sequence[int], v: Sequence[int]) -> bool:
        return self.normal_form(u) == self.normal_form(v)

    def __repr__(self):
        return f"WordBackend({self.kind}, gens={','.join(self.presentation.names)})"


def normal_form(b: WordBackend, w: Sequence[int]) -> Word:
    return b.normal_form(w)


def equal(b: WordBackend, u: Sequence[int], v: Sequence[int]) -> bool:
    return b.equal(u, v)


def get_backend(p: Presentation, budgets: Budgets = Budgets()) -> WordBackend:
    """Knuth-Bendix first, Todd-Coxeter as fallback."""
    failures = []
    try:
        return WordBackend(knuth_bendix(p, budgets.kb_max_rules, budgets.kb_max_len))
    except BudgetExhausted as exc:
        log.info("completion failed: %s", exc)
        failures.append(exc)
    try:
        return WordBackend(todd_coxeter(p, budgets.tc_max_cosets))
    except BudgetExhausted as exc:
        log.info("coset enumeration failed: %s", exc)
        failures.append(exc)
    raise WordProblemUndecided(failures)
