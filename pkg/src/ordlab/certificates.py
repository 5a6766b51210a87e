"""Refutation certificates and their checker.

A certificate is a binary decision tree over inverse pairs.  Each leaf holds
a witness: a product of elements that are positive on the path to the leaf
(optionally conjugated, for bi-order refutations) which equals the
identity.  Since a product of positive elements can never be 1, every
branch of sign choices is refuted.

Elements are stored as normal-form words so a certificate can be written
out and checked in a later run; they are resolved to ball ids only when
checked.  The checker uses nothing but normal forms and ball lookups.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass
from typing import NamedTuple, Optional, Union

from .ball import Ball
from .presentation import Presentation, Word, invert, parse_presentation
from .wordproblem import WordBackend

KINDS = ("preorder", "prebiorder", "involution")


class CertificateError(ValueError):
    """Malformed certificate (bad JSON shape or an unresolvable element)."""


class WitnessTerm(NamedTuple):
    base: Word
    conj: Optional[Word] = None


@dataclass
class Leaf:
    witness: list[WitnessTerm]


@dataclass
class Node:
    pair: Word
    pos: "Tree"
    neg: "Tree"


Tree = Union[Leaf, Node]


@dataclass
class RefutationCertificate:
    kind: str
    radius: int
    presentation: Presentation
    tree: Tree

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        fmt = self.presentation.format_word

        def term(t: WitnessTerm) -> dict:
            d = {"base": fmt(t.base)}
            if t.conj is not None:
                d["conj"] = fmt(t.conj)
            return d

        def build(node):
            if isinstance(node, Leaf):
                return {"witness": [term(t) for t in node.witness]}
            return {"pair": fmt(node.pair), "pos": build(node.pos), "neg": build(node.neg)}

        with _deep_recursion():
            tree = build(self.tree)
        return {"kind": self.kind, "radius": self.radius, "group": self.presentation.text(), "tree": tree}

    def dumps(self) -> str:
        with _deep_recursion():
            return json.dumps(self.to_json(), separators=(",", ":")) + "\n"

    @classmethod
    def from_json(cls, data: dict) -> "RefutationCertificate":
        try:
            kind = data["kind"]
            radius = data["radius"]
            p = parse_presentation(data["group"])
            raw_tree = data["tree"]
        except (KeyError, TypeError, ValueError) as exc:
            raise CertificateError(f"malformed certificate: {exc}") from exc
        if kind not in KINDS:
            raise CertificateError(f"unknown certificate kind {kind!r}")
        if not isinstance(radius, int) or isinstance(radius, bool) or radius < 1:
            raise CertificateError("radius must be a positive integer")

        def word(s):
            if not isinstance(s, str):
                raise CertificateError(f"expected a word string, got {s!r}")
            try:
                return p.word(s)
            except ValueError as exc:
                raise CertificateError(str(exc)) from exc

        def build(d):
            if not isinstance(d, dict):
                raise CertificateError("tree node must be an object")
            if set(d) == {"witness"}:
                if not isinstance(d["witness"], list):
                    raise CertificateError("witness must be a list")
                terms = []
                for t in d["witness"]:
                    if not isinstance(t, dict) or "base" not in t or not set(t) <= {"base", "conj"}:
                        raise CertificateError("bad witness term")
                    terms.append(WitnessTerm(word(t["base"]), word(t["conj"]) if "conj" in t else None))
                return Leaf(terms)
            if set(d) == {"pair", "pos", "neg"}:
                return Node(word(d["pair"]), build(d["pos"]), build(d["neg"]))
            raise CertificateError(f"bad tree node keys {sorted(d)}")

        with _deep_recursion():
            tree = build(raw_tree)
        return cls(kind, radius, p, tree)

    @classmethod
    def loads(cls, text: str) -> "RefutationCertificate":
        try:
            with _deep_recursion():
                data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CertificateError(f"invalid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise CertificateError("certificate must be a JSON object")
        return cls.from_json(data)

    def leaves(self) -> list[Leaf]:
        out, stack = [], [self.tree]
        while stack:
            node = stack.pop()
            if isinstance(node, Leaf):
                out.append(node)
            else:
                stack.extend((node.neg, node.pos))
        return out


class _deep_recursion:
    # nested JSON for long propagation chains
    def __enter__(self):
        self.old = sys.getrecursionlimit()
        sys.setrecursionlimit(max(self.old, 100_000))

    def __exit__(self, *exc):
        sys.setrecursionlimit(self.old)


# ---------------------------------------------------------------------------
# extraction from a search trace

def involution_certificate(ball: Ball, g: int) -> RefutationCertificate:
    nf = ball.elements[g].nf
    return RefutationCertificate("involution", ball.radius, ball.presentation,
                                 Leaf([WitnessTerm(nf), WitnessTerm(nf)]))


def _witness_ids(clause) -> list[tuple[int, Optional[int]]]:
    a, b, c = clause.triple
    if clause.kind == "prod":
        # g*h = f with g, h positive and f negative: g * h * f^-1 = 1
        return [(a, None), (b, None), (-1 - c, None)]
    # g^-1 q g = c with q positive and c negative: (g^-1 q g) * c^-1 = 1
    return [(b, a), (-1 - c, None)]


def extract_certificate(enc, trace) -> RefutationCertificate:
    """Turn the recorded search tree into a trimmed certificate.

    A branch node whose positive subtree never uses the positive member of
    the pair as a witness base is replaced by that subtree (and likewise for
    the negative side), so every surviving decision is load-bearing.
    """
    from .solver import Branch, Conflict

    ball = enc.ball
    if trace is None:
        raise CertificateError("malformed trace: empty search tree")

    def resolve(i):
        return int(ball.inverse[-1 - i]) if i < 0 else i

    # post-order without recursion: (node, visited)
    results: dict[int, tuple[object, frozenset]] = {}
    stack = [(trace, False)]
    while stack:
        node, done = stack.pop()
        if isinstance(node, Conflict):
            terms = [(resolve(b), cj) for b, cj in _witness_ids(enc.clauses[node.clause])]
            leaf = Leaf([WitnessTerm(ball.elements[b].nf, None if cj is None else ball.elements[cj].nf)
                         for b, cj in terms])
            results[id(node)] = (leaf, frozenset(b for b, _ in terms))
            continue
        if not isinstance(node, Branch) or node.pos is None or node.neg is None:
            raise CertificateError("malformed trace: incomplete branch")
        if not done:
            stack.append((node, True))
            stack.append((node.neg, False))
            stack.append((node.pos, False))
            continue
        rep, inv = enc.pairs[node.var]
        pos, used_pos = results.pop(id(node.pos))
        neg, used_neg = results.pop(id(node.neg))
        if rep not in used_pos:
            results[id(node)] = (pos, used_pos)
        elif inv not in used_neg:
            results[id(node)] = (neg, used_neg)
        else:
            results[id(node)] = (Node(ball.elements[rep].nf, pos, neg), used_pos | used_neg)
    tree, _ = results[id(trace)]
    return RefutationCertificate(enc.mode, ball.radius, ball.presentation, tree)


# ---------------------------------------------------------------------------
# checking

def _resolve(backend: WordBackend, ball: Ball, w: Word) -> int:
    i = ball.index.get(backend.normal_form(w))
    if i is None:
        raise CertificateError(f"element {ball.presentation.format_word(w)!r} is not in the ball")
    return i


def _product_is_identity(backend: WordBackend, ball: Ball, ids: list[tuple[int, Optional[int]]]) -> bool:
    word: list[int] = []
    for b, cj in ids:
        nf = ball.elements[b].nf
        if cj is None:
            word.extend(nf)
        else:
            c = ball.elements[cj].nf
            word.extend(invert(c))
            word.extend(nf)
            word.extend(c)
    return backend.normal_form(word) == ()


def check_certificate(backend: WordBackend, ball: Ball, cert: RefutationCertificate) -> bool:
    """True iff the certificate refutes every sign choice on the ball.

    Raises :class:`CertificateError` if the certificate names an element
    outside the ball.
    """
    if cert.kind not in KINDS or cert.radius != ball.radius:
        return False

    if cert.kind == "involution":
        tree = cert.tree
        if not isinstance(tree, Leaf) or len(tree.witness) != 2:
            return False
        (b1, c1), (b2, c2) = tree.witness
        if c1 is not None or c2 is not None:
            return False
        g1, g2 = _resolve(backend, ball, b1), _resolve(backend, ball, b2)
        return g1 == g2 != 0 and _product_is_identity(backend, ball, [(g1, None), (g2, None)])

    inverse = ball.inverse
    # iterative DFS carrying the set of positive ids and decided pair keys
    stack: list[tuple[Tree, frozenset, frozenset]] = [(cert.tree, frozenset(), frozenset())]
    while stack:
        node, positive, decided = stack.pop()
        if isinstance(node, Node):
            if not isinstance(node.pos, (Node, Leaf)) or not isinstance(node.neg, (Node, Leaf)):
                return False
            e = _resolve(backend, ball, node.pair)
            inv = int(inverse[e])
            if e == 0 or inv == e:
                return False
            key = min(e, inv)
            if key in decided:
                return False
            d = decided | {key}
            stack.append((node.neg, positive | {inv}, d))
            stack.append((node.pos, positive | {e}, d))
        elif isinstance(node, Leaf):
            if not node.witness:
                return False
            ids = []
            for t in node.witness:
                b = _resolve(backend, ball, t.base)
                if b not in positive:
                    return False
                if t.conj is not None:
                    if cert.kind != "prebiorder":
                        return False
                    ids.append((b, _resolve(backend, ball, t.conj)))
                else:
                    ids.append((b, None))
            if not _product_is_identity(backend, ball, ids):
                return False
        else:
            return False
    return True
