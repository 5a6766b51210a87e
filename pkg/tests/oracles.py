"""Reference computations that share no code with the package."""

from itertools import product


def lattice_ball(dim, k):
    """Points of Z^dim with taxicab norm <= k."""
    pts = [v for v in product(range(-k, k + 1), repeat=dim) if sum(map(abs, v)) <= k]
    return sorted(pts)


def lattice_products(dim, k):
    """(g, h, g+h) for nonzero g, h, g+h all inside the ball."""
    ball = set(lattice_ball(dim, k))
    zero = (0,) * dim
    out = []
    for g in ball:
        for h in ball:
            f = tuple(a + b for a, b in zip(g, h))
            if g != zero and h != zero and f != zero and f in ball:
                out.append((g, h, f))
    return out


def lattice_preorders(dim, k):
    """All positive sets Q of the ball satisfying (Q.Q) & B <= Q and B = 1 + Q + Q^-1."""
    zero = (0,) * dim
    pts = [v for v in lattice_ball(dim, k) if v != zero]
    reps = sorted({max(v, tuple(-x for x in v)) for v in pts})
    triples = lattice_products(dim, k)
    found = []
    for signs in product((1, -1), repeat=len(reps)):
        pos = set()
        for r, s in zip(reps, signs):
            pos.add(r if s > 0 else tuple(-x for x in r))
        if all(f in pos for g, h, f in triples if g in pos and h in pos):
            found.append(frozenset(pos))
    return found


def reduced_word_count(rank, k):
    """Freely reduced words of length <= k over rank generators."""
    total, layer = 1, 2 * rank
    for _ in range(k):
        total += layer
        layer *= 2 * rank - 1
    return total
