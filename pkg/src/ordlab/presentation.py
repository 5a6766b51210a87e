"""Group presentations and free-group words.

A word is a tuple of integer letter codes.  Generator ``i`` is encoded as
``2*i`` and its inverse as ``2*i + 1``, so ``code ^ 1`` inverts a letter and
the natural integer order is the shortlex letter order
``x1 < x1^-1 < x2 < x2^-1 < ...``.

The text format is::

    # optional comment lines
    gens: x, y
    rels: Xyxy

Lowercase letters are generators, the matching uppercase letter is the
inverse.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

Word = tuple[int, ...]

MAX_GENERATORS = 26

__all__ = [
    "Word",
    "Generator",
    "Presentation",
    "PresentationError",
    "letter",
    "gen_index",
    "exponent",
    "free_reduce",
    "cyclic_reduce",
    "invert",
    "shortlex_key",
    "parse_presentation",
    "format_presentation",
]


class PresentationError(ValueError):
    """Raised on malformed presentation text.  Carries 1-based line/column."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


class Generator(NamedTuple):
    index: int
    name: str


def letter(index: int, sign: int = 1) -> int:
    return 2 * index + (0 if sign > 0 else 1)


def gen_index(code: int) -> int:
    return code >> 1


def exponent(code: int) -> int:
    return -1 if code & 1 else 1


def free_reduce(w: Sequence[int]) -> Word:
    out: list[int] = []
    for c in w:
        if out and out[-1] == c ^ 1:
            out.pop()
        else:
            out.append(c)
    return tuple(out)


def cyclic_reduce(w: Sequence[int]) -> Word:
    w = free_reduce(w)
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == w[j - 1] ^ 1:
        i += 1
        j -= 1
    return w[i:j]


def invert(w: Sequence[int]) -> Word:
    return tuple(c ^ 1 for c in reversed(w))


def shortlex_key(w: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    return (len(w), tuple(w))


@dataclass(frozen=True)
class Presentation:
    generators: tuple[Generator, ...]
    relators: tuple[Word, ...]

    def __post_init__(self):
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise PresentationError("duplicate generator name")
        if len(names) > MAX_GENERATORS:
            raise PresentationError(f"at most {MAX_GENERATORS} generators")
        for i, g in enumerate(self.generators):
            if g.index != i:
                raise PresentationError(f"generator {g.name!r} has index {g.index}, expected {i}")
        n = len(self.generators)
        for r in self.relators:
            if not r:
                raise PresentationError("empty relator")
            if cyclic_reduce(r) != r:
                raise PresentationError("relator is not freely and cyclically reduced")
            if any(gen_index(c) >= n for c in r):
                raise PresentationError("relator uses an unknown generator")

    @classmethod
    def from_names(cls, names: Iterable[str], relators: Iterable[Sequence[int]] = ()) -> "Presentation":
        gens = tuple(Generator(i, nm) for i, nm in enumerate(names))
        rels = tuple(r for r in (cyclic_reduce(r) for r in relators) if r)
        return cls(gens, rels)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    @property
    def n_letters(self) -> int:
        return 2 * len(self.generators)

    def word(self, text: str) -> Word:
        """Parse a word such as ``"xYx"``; the empty string is the identity."""
        lookup = {g.name: g.index for g in self.generators}
        out = []
        for col, ch in enumerate(text.strip(), start=1):
            if ch.lower() not in lookup:
                raise PresentationError(f"unknown letter {ch!r}", 1, col)
            out.append(letter(lookup[ch.lower()], 1 if ch.islower() else -1))
        return tuple(out)

    def format_word(self, w: Sequence[int]) -> str:
        names = self.names
        return "".join(
            names[gen_index(c)] if exponent(c) > 0 else names[gen_index(c)].upper()
            for c in w
        )

    def text(self) -> str:
        return format_presentation(self)


_NAME = re.compile(r"[a-z]")


def _strip_comments(text: str) -> list[tuple[int, str]]:
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if raw.strip().startswith("#") or not raw.strip():
            continue
        lines.append((lineno, raw))
    return lines


def _field(lineno: int, raw: str, key: str) -> tuple[str, int]:
    stripped = raw.lstrip()
    offset = len(raw) - len(stripped)
    if not stripped.startswith(key + ":"):
        raise PresentationError(f"expected '{key}:'", lineno, offset + 1)
    return stripped[len(key) + 1:], offset + len(key) + 2


def parse_presentation(text: str) -> Presentation:
    lines = _strip_comments(text)
    if len(lines) < 2:
        lineno = lines[0][0] + 1 if lines else 1
        raise PresentationError("expected a 'gens:' line followed by a 'rels:' line", lineno, 1)
    if len(lines) > 2:
        raise PresentationError("unexpected trailing content", lines[2][0], 1)

    (gl, graw), (rl, rraw) = lines
    body, col0 = _field(gl, graw, "gens")
    names: list[str] = []
    col = col0
    for tok in body.split(","):
        name = tok.strip()
        tcol = col + (len(tok) - len(tok.lstrip()))
        if not _NAME.fullmatch(name):
            raise PresentationError(f"bad generator name {name!r}", gl, tcol)
        if name in names:
            raise PresentationError(f"duplicate generator name {name!r}", gl, tcol)
        names.append(name)
        col += len(tok) + 1
    if len(names) > MAX_GENERATORS:
        raise PresentationError(f"at most {MAX_GENERATORS} generators", gl, col0)

    body, col0 = _field(rl, rraw, "rels")
    lookup = {nm: i for i, nm in enumerate(names)}
    relators: list[Word] = []
    col = col0
    if body.strip():
        for tok in body.split(","):
            lead = len(tok) - len(tok.lstrip())
            word_text = tok.strip()
            if not word_text:
                raise PresentationError("empty relator", rl, col + lead)
            w = []
            for j, ch in enumerate(word_text):
                if ch.lower() not in lookup:
                    raise PresentationError(f"unknown letter {ch!r} in relator", rl, col + lead + j)
                w.append(letter(lookup[ch.lower()], 1 if ch.islower() else -1))
            r = cyclic_reduce(w)
            if r:
                relators.append(r)
            col += len(tok) + 1
    return Presentation.from_names(names, relators)


def format_presentation(p: Presentation) -> str:
    gens = ", ".join(p.names)
    rels = ", ".join(p.format_word(r) for r in p.relators)
    return f"gens: {gens}\nrels: {rels}\n" if rels else f"gens: {gens}\nrels:\n"
