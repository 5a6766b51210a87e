"""Finite approximations of the space of orderings.

Level k holds every valid sign assignment on B_k.  Because ball ids are
ordered by length, B_k is an id prefix of B_{k+1} and restriction is a
slice.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .ball import Ball, build_ball
from .presentation import Word
from .solver import PREORDER, SignAssignment, enumerate_preorders
from .wordproblem import WordBackend


class ConstraintOutsideBall(ValueError):
    pass


@dataclass
class Level:
    radius: int
    ball: Ball
    assignments: list[SignAssignment]
    truncated: bool

    @property
    def count(self) -> int:
        return len(self.assignments)


@dataclass
class LevelDiagram:
    mode: str
    levels: list[Level]
    # restriction[i][j] = index in levels[i] of the restriction of levels[i+1].assignments[j]
    restriction: list[np.ndarray] = field(default_factory=list)

    @property
    def partial(self) -> bool:
        return any(l.truncated for l in self.levels)

    @property
    def counts(self) -> list[int]:
        return [l.count for l in self.levels]

    @property
    def first_empty(self) -> Optional[int]:
        for l in self.levels:
            if l.count == 0:
                return l.radius
        return None

    def level(self, radius: int) -> Level:
        for l in self.levels:
            if l.radius == radius:
                return l
        raise KeyError(f"no level at radius {radius}")

    @property
    def violations(self) -> int:
        return int(sum((m < 0).sum() for m in self.restriction))

    def to_json(self, with_assignments: bool = False) -> dict:
        levels = []
        for l in self.levels:
            d = {"radius": l.radius, "ball_size": len(l.ball), "count": l.count, "truncated": l.truncated}
            if with_assignments:
                d["assignments"] = [a.to_json(l.ball) for a in l.assignments]
            levels.append(d)
        maps = []
        for i, m in enumerate(self.restriction):
            maps.append({
                "from": self.levels[i + 1].radius,
                "to": self.levels[i].radius,
                "map": [int(x) for x in m],
                "extensions": extension_report(self, self.levels[i].radius),
            })
        return {
            "mode": self.mode,
            "counts": self.counts,
            "first_empty": self.first_empty,
            "partial": self.partial,
            "levels": levels,
            "restriction_maps": maps,
            "violations": self.violations,
        }


def _restriction_map(lower: Level, upper: Level) -> np.ndarray:
    n = len(lower.ball)
    upper_nfs = [e.nf for e in upper.ball.elements[:n]]
    if upper_nfs != [e.nf for e in lower.ball.elements]:
        raise RuntimeError(f"B_{lower.radius} is not an id prefix of B_{upper.radius}")
    where = {a.key(): i for i, a in enumerate(lower.assignments)}
    return np.array([where.get(a.restrict(n).key(), -1) for a in upper.assignments], dtype=np.int64)


def build_diagram(backend: WordBackend, k_max: int, mode: str = PREORDER, k_min: int = 1,
                  limit: int = 100_000, stop_at_empty: bool = True, **ball_kw) -> LevelDiagram:
    """Enumerate every level from ``k_min`` to ``k_max`` and link consecutive ones.

    Levels past the first empty one are empty as well; with ``stop_at_empty``
    they are not computed.
    """
    if k_min < 1 or k_max < k_min:
        raise ValueError("need 1 <= k_min <= k_max")
    levels = []
    for k in range(k_min, k_max + 1):
        ball = build_ball(backend, k, **ball_kw)
        en = enumerate_preorders(ball, mode, limit=limit)
        levels.append(Level(k, ball, en.assignments, en.truncated))
        if stop_at_empty and not en.assignments and not en.truncated:
            break
    diagram = LevelDiagram(mode, levels)
    diagram.restriction = [_restriction_map(levels[i], levels[i + 1]) for i in range(len(levels) - 1)]
    return diagram


def neighborhood_query(diagram: LevelDiagram, radius: int,
                       constraints: Sequence[tuple[Word, int]]) -> list[int]:
    """Indices of level assignments satisfying every ``(w, sign)`` constraint.

    ``(w, +1)`` asks for ``1 < w``, ``(w, -1)`` for ``w < 1``.
    """
    level = diagram.level(radius)
    ball = level.ball
    wanted = []
    for w, s in constraints:
        i = ball.lookup(w)
        if i is None:
            raise ConstraintOutsideBall(f"{ball.presentation.format_word(w)!r} is not in B_{radius}")
        wanted.append((i, 1 if s > 0 else -1))
    return [j for j, a in enumerate(level.assignments) if all(a.signs[i] == s for i, s in wanted)]


def extension_report(diagram: LevelDiagram, radius: int) -> list[int]:
    """For each level-``radius`` assignment, how many next-level assignments restrict to it."""
    idx = [l.radius for l in diagram.levels].index(radius)
    lower = diagram.levels[idx]
    if lower.count == 0:
        return []
    if idx + 1 >= len(diagram.levels):
        raise ValueError(f"no level above radius {radius}")
    m = diagram.restriction[idx]
    return np.bincount(m[m >= 0], minlength=lower.count).tolist()
