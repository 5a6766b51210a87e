"""Known positive cones used as membership oracles.

Each oracle evaluates words in an explicit model of its group (exponent
vectors for Z^n, normal form y^m x^n for the Klein bottle group), so
membership never depends on a rewriting system.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .ball import Ball
from .presentation import Presentation, exponent, gen_index
from .solver import SignAssignment


class GroupMismatch(ValueError):
    """The oracle's group model does not fit the presentation."""


@dataclass(frozen=True)
class ConeOracle:
    name: str
    group: str
    n_generators: int
    model: Callable[[Sequence[int]], tuple]
    positive: Callable[[tuple], bool]
    biorder: bool

    @property
    def claims(self) -> tuple[str, ...]:
        return ("left-order", "bi-order") if self.biorder else ("left-order",)

    def member(self, w: Sequence[int]) -> bool:
        return self.positive(self.model(w))

    def is_identity(self, w: Sequence[int]) -> bool:
        return not any(self.model(w))

    def check_binding(self, p: Presentation):
        if len(p.generators) != self.n_generators:
            raise GroupMismatch(f"cone {self.name!r} needs {self.n_generators} generators, "
                                f"presentation has {len(p.generators)}")
        for r in p.relators:
            if not self.is_identity(r):
                raise GroupMismatch(f"relator {p.format_word(r)!r} is not trivial in the model of {self.group}")


def _exponent_vector(n: int):
    def model(w):
        v = [0] * n
        for c in w:
            i = gen_index(c)
            if i >= n:
                raise GroupMismatch(f"generator index {i} outside Z^{n}")
            v[i] += exponent(c)
        return tuple(v)
    return model


def lex_cone(n: int) -> ConeOracle:
    """Lexicographic order on Z^n: first nonzero exponent sum is positive."""
    if not 1 <= n <= 26:
        raise ValueError("dimension must be between 1 and 26")

    def positive(v):
        for x in v:
            if x:
                return x > 0
        return False

    return ConeOracle(f"lex:{n}", f"Z^{n}", n, _exponent_vector(n), positive, True)


def _slope_positive(v) -> bool:
    # m*sqrt(2) + n > 0, exactly
    m, n = v
    if m >= 0 and n >= 0:
        return m > 0 or n > 0
    if m <= 0 and n <= 0:
        return False
    if m > 0:
        return 2 * m * m > n * n
    return n * n > 2 * m * m


def slope_cone() -> ConeOracle:
    """Lattice points of Z^2 on the positive side of the line m*sqrt(2) + n = 0."""
    return ConeOracle("slope", "Z^2", 2, _exponent_vector(2), _slope_positive, True)


def _klein_model(w):
    # element y^m x^n; x^n y = y^((-1)^n) x^n
    m = n = 0
    for c in w:
        e = exponent(c)
        if gen_index(c) == 0:
            n += e
        elif gen_index(c) == 1:
            m += e if n % 2 == 0 else -e
        else:
            raise GroupMismatch("Klein bottle group has two generators")
    return (m, n)


def klein_cone() -> ConeOracle:
    """Klein bottle group <x, y | x^-1 y x = y^-1>: positive iff n > 0, or n = 0 and m > 0."""
    return ConeOracle("klein", "Klein bottle", 2, _klein_model,
                      lambda v: v[1] > 0 or (v[1] == 0 and v[0] > 0), False)


def get_cone(name: str) -> ConeOracle:
    name = name.strip()
    if name == "slope":
        return slope_cone()
    if name == "klein":
        return klein_cone()
    if name.startswith("lex:"):
        try:
            return lex_cone(int(name[4:]))
        except ValueError as exc:
            raise GroupMismatch(f"bad cone name {name!r}: {exc}") from None
    raise GroupMismatch(f"unknown cone {name!r}; expected lex:<n>, slope or klein")


def restrict_to_ball(cone: ConeOracle, ball: Ball) -> SignAssignment:
    """Sign of every ball element under the cone."""
    cone.check_binding(ball.presentation)
    signs = np.zeros(len(ball), dtype=np.int8)
    for e in ball.elements[1:]:
        v = cone.model(e.nf)
        if not any(v):
            raise GroupMismatch(f"{ball.name(e.id)!r} is nontrivial in the ball but trivial in the model of {cone.group}")
        signs[e.id] = 1 if cone.positive(v) else -1
    return SignAssignment(signs)
