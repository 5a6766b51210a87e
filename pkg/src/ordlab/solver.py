"""Sign-assignment search for preorders and pre-biorders of a ball.

One boolean variable per inverse pair ``{g, g^-1}``; the variable is true
when the pair's representative (the smaller id) is positive.  Semigroup
closure inside the ball gives a clause ``-P(g) | -P(h) | P(f)`` per product
triple, and conjugation closure a clause ``-P(q) | P(c)`` per conjugation
triple.  The search is chronological DPLL with unit propagation.  While it
runs it records a refutation tree: every decision and every propagated
literal becomes a branch node, every falsified clause a leaf.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import kernels
from .ball import Ball

PREORDER = "preorder"
PREBIORDER = "prebiorder"
MODES = (PREORDER, PREBIORDER)

DEFAULT_NODE_CAP = 10_000_000


@dataclass
class SignAssignment:
    """Signs indexed by ball id; entry 0 (the identity) is 0."""

    signs: np.ndarray

    def __post_init__(self):
        self.signs = np.asarray(self.signs, dtype=np.int8)

    def sign(self, i: int) -> int:
        return int(self.signs[i])

    @property
    def positive(self) -> list[int]:
        return [int(i) for i in np.nonzero(self.signs > 0)[0]]

    def restrict(self, n: int) -> "SignAssignment":
        return SignAssignment(self.signs[:n].copy())

    def negate(self) -> "SignAssignment":
        return SignAssignment(-self.signs)

    def key(self) -> bytes:
        return self.signs.tobytes()

    def __eq__(self, other):
        return isinstance(other, SignAssignment) and np.array_equal(self.signs, other.signs)

    def __hash__(self):
        return hash(self.key())

    def to_json(self, ball: Ball) -> list:
        return [[ball.name(i), int(s)] for i, s in enumerate(self.signs) if i]


# ---------------------------------------------------------------------------
# independent validity checks (no search involved)

def _inverse_consistent(ball: Ball, signs: np.ndarray) -> bool:
    if signs.shape != (len(ball),) or signs[0] != 0:
        return False
    rest = signs[1:]
    if np.any((rest != 1) & (rest != -1)):
        return False
    return bool(np.all(signs[ball.inverse] == -signs))


def is_preorder(ball: Ball, a: SignAssignment) -> bool:
    signs = np.asarray(a.signs, dtype=np.int8)
    if not _inverse_consistent(ball, signs):
        return False
    return bool(kernels.batch_valid(signs, ball.product_triples)[0])


def is_prebiorder(ball: Ball, a: SignAssignment) -> bool:
    signs = np.asarray(a.signs, dtype=np.int8)
    if not _inverse_consistent(ball, signs):
        return False
    return bool(kernels.batch_valid(signs, ball.product_triples, ball.conj_triples)[0])


def is_valid(ball: Ball, a: SignAssignment, mode: str) -> bool:
    return is_prebiorder(ball, a) if mode == PREBIORDER else is_preorder(ball, a)


def brute_force(ball: Ball, mode: str = PREORDER) -> list[SignAssignment]:
    """Every valid assignment, by testing all 2^pairs sign patterns."""
    pairs = ball.pairs
    if ball.involutions:
        return []
    reps = np.array([p[0] for p in pairs], dtype=np.int64)
    invs = np.array([p[1] for p in pairs], dtype=np.int64)
    ctrip = ball.conj_triples if mode == PREBIORDER else None
    ok = kernels.brute_force_valid(len(pairs), reps, invs, len(ball), ball.product_triples, ctrip)
    out = []
    for pat in np.nonzero(ok)[0]:
        s = np.zeros(len(ball), dtype=np.int8)
        for i in range(len(pairs)):
            v = -1 if (int(pat) >> i) & 1 else 1
            s[reps[i]] = v
            s[invs[i]] = -v
        out.append(SignAssignment(s))
    return out


# ---------------------------------------------------------------------------
# search tree records

@dataclass
class Branch:
    var: int
    pos: object = None
    neg: object = None


@dataclass
class Conflict:
    clause: int


@dataclass
class Clause:
    lits: tuple[int, ...]
    kind: str  # "prod" or "conj"
    triple: tuple[int, int, int]


@dataclass
class Stats:
    nodes: int = 0
    propagations: int = 0
    conflicts: int = 0

    def to_json(self) -> dict:
        return {"nodes": self.nodes, "propagations": self.propagations, "conflicts": self.conflicts}


@dataclass
class SearchOutcome:
    status: str  # "sat" | "unsat" | "undecided"
    mode: str
    radius: int
    assignment: Optional[SignAssignment] = None
    certificate: object = None
    stats: Stats = field(default_factory=Stats)
    reason: str = ""

    def to_json(self, ball: Ball, certificate_path: str | None = None) -> dict:
        out = {"status": self.status, "mode": self.mode, "radius": self.radius, "ball_size": len(ball)}
        out["assignment"] = self.assignment.to_json(ball) if self.assignment is not None else None
        out["certificate"] = certificate_path
        out["stats"] = self.stats.to_json()
        if self.reason:
            out["reason"] = self.reason
        return out


class Encoding:
    """Variables, literals and clauses for one ball."""

    def __init__(self, ball: Ball, mode: str):
        if mode not in MODES:
            raise ValueError(f"unknown mode {mode!r}")
        self.ball = ball
        self.mode = mode
        n = len(ball)
        self.pairs = ball.pairs
        self.var_of = np.full(n, -1, dtype=np.int64)
        self.rep_of = np.zeros(n, dtype=np.bool_)
        for v, (r, i) in enumerate(self.pairs):
            self.var_of[r] = v
            self.var_of[i] = v
            self.rep_of[r] = True
        self.clauses: list[Clause] = []
        seen = set()
        for g, h, f in ball.product_triples.tolist():
            self._add((self.neg(g), self.neg(h), self.pos(f)), "prod", (g, h, f), seen)
        if mode == PREBIORDER:
            for g, q, c in ball.conj_triples.tolist():
                if q != c:
                    self._add((self.neg(q), self.pos(c)), "conj", (g, q, c), seen)
        self.occ: list[list[int]] = [[] for _ in range(2 * len(self.pairs))]
        for ci, cl in enumerate(self.clauses):
            for lit in cl.lits:
                self.occ[lit].append(ci)

    def pos(self, e: int) -> int:
        """Literal 'e is positive'."""
        return 2 * int(self.var_of[e]) + (0 if self.rep_of[e] else 1)

    def neg(self, e: int) -> int:
        return self.pos(e) ^ 1

    def _add(self, lits, kind, triple, seen):
        uniq = tuple(sorted(set(lits)))
        if any(l ^ 1 in uniq for l in uniq):
            return
        if uniq in seen:
            return
        seen.add(uniq)
        self.clauses.append(Clause(uniq, kind, triple))

    def signs_from(self, value) -> SignAssignment:
        s = np.zeros(len(self.ball), dtype=np.int8)
        for v, (r, i) in enumerate(self.pairs):
            s[r] = value[v]
            s[i] = -value[v]
        return SignAssignment(s)


class _Search:
    def __init__(self, enc: Encoding, record_tree: bool, node_cap: int):
        self.enc = enc
        self.record = record_tree
        self.node_cap = node_cap
        self.nv = len(enc.pairs)
        self.value = [0] * self.nv
        self.trail: list[int] = []
        self.queue: list[int] = []
        self.stats = Stats()
        self.root = Branch(-1)  # holder; the real tree hangs off .pos
        self.hole = (self.root, "pos")

    # literal helpers
    def lit_value(self, lit: int) -> int:
        v = self.value[lit >> 1]
        if v == 0:
            return 0
        return v if not lit & 1 else -v

    def attach(self, node):
        parent, side = self.hole
        setattr(parent, side, node)

    def assign(self, lit: int, reason: int):
        var = lit >> 1
        val = 1 if not lit & 1 else -1
        self.value[var] = val
        self.trail.append(var)
        self.queue.append(lit)
        if reason >= 0:
            self.stats.propagations += 1
            if self.record:
                node = Branch(var)
                self.attach(node)
                true_side, false_side = ("pos", "neg") if val > 0 else ("neg", "pos")
                setattr(node, false_side, Conflict(reason))
                self.hole = (node, true_side)

    def propagate(self) -> int:
        """Returns the index of a falsified clause, or -1."""
        clauses = self.enc.clauses
        occ = self.enc.occ
        qi = 0
        while qi < len(self.queue):
            lit = self.queue[qi]
            qi += 1
            for ci in occ[lit ^ 1]:
                unassigned = -1
                n_unassigned = 0
                satisfied = False
                for l in clauses[ci].lits:
                    lv = self.lit_value(l)
                    if lv > 0:
                        satisfied = True
                        break
                    if lv == 0:
                        n_unassigned += 1
                        unassigned = l
                if satisfied:
                    continue
                if n_unassigned == 0:
                    self.queue.clear()
                    return ci
                if n_unassigned == 1:
                    self.assign(unassigned, ci)
        self.queue.clear()
        return -1

    def root_units(self) -> int:
        for ci, cl in enumerate(self.enc.clauses):
            if len(cl.lits) == 1:
                lv = self.lit_value(cl.lits[0])
                if lv < 0:
                    self.queue.clear()
                    return ci
                if lv == 0:
                    self.assign(cl.lits[0], ci)
        return self.propagate()

    def undo_to(self, n: int):
        while len(self.trail) > n:
            self.value[self.trail.pop()] = 0

    def run(self, limit: int | None):
        """Yields each full satisfying assignment (as a value list copy).

        Afterwards ``self.exhausted`` says whether the space was fully
        explored and ``self.undecided`` whether the node cap was hit.
        """
        self.exhausted = False
        self.undecided = False
        decisions: list[list] = []  # [trail_len, var, node, second_branch]
        hint = 0
        conflict = self.root_units()
        while True:
            if conflict < 0:
                while hint < self.nv and self.value[hint] != 0:
                    hint += 1
                if hint == self.nv:
                    yield list(self.value)
                else:
                    self.stats.nodes += 1
                    if self.stats.nodes > self.node_cap:
                        self.undecided = True
                        return
                    node = Branch(hint)
                    if self.record:
                        self.attach(node)
                        self.hole = (node, "pos")
                    decisions.append([len(self.trail), hint, node, False])
                    self.assign(2 * hint, -1)
                    conflict = self.propagate()
                    continue
            else:
                self.stats.conflicts += 1
                if self.record:
                    self.attach(Conflict(conflict))
            # backtrack to the newest decision with an untried branch
            while decisions and decisions[-1][3]:
                decisions.pop()
            if not decisions:
                self.exhausted = True
                return
            d = decisions[-1]
            self.undo_to(d[0])
            d[3] = True
            hint = d[1]
            if self.record:
                self.hole = (d[2], "neg")
            self.assign(2 * d[1] + 1, -1)
            conflict = self.propagate()


def _search(ball: Ball, mode: str, node_cap: int) -> SearchOutcome:
    from .certificates import extract_certificate, involution_certificate

    if ball.involutions:
        return SearchOutcome("unsat", mode, ball.radius,
                             certificate=involution_certificate(ball, ball.involutions[0]))
    enc = Encoding(ball, mode)
    s = _Search(enc, record_tree=True, node_cap=node_cap)
    for value in s.run(limit=1):
        return SearchOutcome("sat", mode, ball.radius, assignment=enc.signs_from(value), stats=s.stats)
    if s.undecided:
        return SearchOutcome("undecided", mode, ball.radius, stats=s.stats,
                             reason=f"node_cap budget exhausted (limit {node_cap})")
    cert = extract_certificate(enc, s.root.pos)
    return SearchOutcome("unsat", mode, ball.radius, certificate=cert, stats=s.stats)


def find_preorder(ball: Ball, node_cap: int = DEFAULT_NODE_CAP) -> SearchOutcome:
    return _search(ball, PREORDER, node_cap)


def find_prebiorder(ball: Ball, node_cap: int = DEFAULT_NODE_CAP) -> SearchOutcome:
    return _search(ball, PREBIORDER, node_cap)


def find(ball: Ball, mode: str, node_cap: int = DEFAULT_NODE_CAP) -> SearchOutcome:
    return _search(ball, mode, node_cap)


@dataclass
class Enumeration:
    assignments: list[SignAssignment]
    truncated: bool
    stats: Stats


def enumerate_preorders(ball: Ball, mode: str = PREORDER, limit: int = 100_000,
                        node_cap: int = DEFAULT_NODE_CAP) -> Enumeration:
    """All valid assignments in branch order, at most ``limit`` of them."""
    if limit < 1:
        raise ValueError("limit must be at least 1")
    if ball.involutions:
        return Enumeration([], False, Stats())
    enc = Encoding(ball, mode)
    s = _Search(enc, record_tree=False, node_cap=node_cap)
    found = []
    truncated = False
    for value in s.run(limit=limit):
        if len(found) == limit:
            truncated = True
            break
        found.append(enc.signs_from(value))
    if s.undecided:
        truncated = True
    return Enumeration(found, truncated, s.stats)
