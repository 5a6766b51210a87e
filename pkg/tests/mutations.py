"""Single-site mutations of certificate JSON used by the fuzz tests."""

import copy
import random

KINDS = ("invert_base", "replace_base", "delete_term", "insert_term",
         "swap_children", "change_pair", "drop_child")


def _sites(tree):
    nodes, leaves = [], []
    stack = [(tree, None, None)]
    while stack:
        node, parent, key = stack.pop()
        if "witness" in node:
            leaves.append((node, parent, key))
        else:
            nodes.append((node, parent, key))
            stack.append((node["pos"], node, "pos"))
            stack.append((node["neg"], node, "neg"))
    return nodes, leaves


def mutate(data, rng: random.Random, inverse):
    """Return a mutated deep copy of certificate JSON ``data``, or None if the
    chosen mutation does not apply.  ``inverse`` maps each non-identity
    normal-form string of the ball to that of its inverse."""
    elements = sorted(inverse)
    out = copy.deepcopy(data)
    nodes, leaves = _sites(out["tree"])
    kind = rng.choice(KINDS)
    if kind in ("swap_children", "change_pair", "drop_child"):
        if not nodes:
            return None
        node, parent, key = rng.choice(nodes)
        if kind == "swap_children":
            node["pos"], node["neg"] = node["neg"], node["pos"]
        elif kind == "change_pair":
            choices = [e for e in elements if e != node["pair"]]
            node["pair"] = rng.choice(choices)
        else:
            child = node[rng.choice(("pos", "neg"))]
            if parent is None:
                out["tree"] = child
            else:
                parent[key] = child
        return out
    leaf, _, _ = rng.choice(leaves)
    terms = leaf["witness"]
    i = rng.randrange(len(terms))
    if kind == "invert_base":
        new = inverse.get(terms[i]["base"])
        if new is None or new == terms[i]["base"]:
            return None
        terms[i]["base"] = new
    elif kind == "replace_base":
        terms[i]["base"] = rng.choice([e for e in elements if e != terms[i]["base"]])
    elif kind == "delete_term":
        del terms[i]
    else:
        terms.insert(rng.randrange(len(terms) + 1), {"base": rng.choice(elements)})
    return out


def ball_inverses(ball):
    return {ball.name(e.id): ball.name(e.inverse_id) for e in ball.elements[1:]}


def mutations(data, inverse, count, seed=0):
    """``count`` distinct-from-original mutations, deterministically seeded."""
    rng = random.Random(seed)
    found = []
    while len(found) < count:
        m = mutate(data, rng, inverse)
        if m is not None and m != data:
            found.append(m)
    return found
