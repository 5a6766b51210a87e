import itertools

import numpy as np
import pytest

from conftest import backend_for
from oracles import lattice_preorders
from ordlab.presentation import letter
from ordlab.solver import PREBIORDER, is_preorder
from ordlab.space import ConstraintOutsideBall, build_diagram, extension_report, neighborhood_query

a, A, b, B = letter(0), letter(0, -1), letter(1), letter(1, -1)


@pytest.fixture(scope="module")
def z2_diagram():
    return build_diagram(backend_for("z2"), 3)


def test_z_counts_and_bijections():
    d = build_diagram(backend_for("z"), 4)
    assert d.counts == [2, 2, 2, 2]
    for m in d.restriction:
        assert sorted(m.tolist()) == [0, 1]
    for k in (1, 2, 3):
        assert extension_report(d, k) == [1, 1]


def test_z2_diagram(z2_diagram):
    d = z2_diagram
    assert d.counts == [len(lattice_preorders(2, k)) for k in (1, 2, 3)] == [4, 8, 16]
    assert d.violations == 0 and not d.partial
    for i, m in enumerate(d.restriction):
        assert (m >= 0).all()
        assert sum(extension_report(d, i + 1)) == d.counts[i + 1]


@pytest.mark.parametrize("name", ["z2", "klein", "f2"])
def test_restrictions_are_total(name):
    d = build_diagram(backend_for(name), 3 if name != "f2" else 2)
    assert d.violations == 0
    for lower, upper, m in zip(d.levels, d.levels[1:], d.restriction):
        n = len(lower.ball)
        for j, s in enumerate(upper.assignments):
            r = s.restrict(n)
            assert is_preorder(lower.ball, r)
            assert lower.assignments[m[j]] == r


@pytest.mark.parametrize("name", ["z2", "klein", "f2"])
def test_counts_are_even(name):
    d = build_diagram(backend_for(name), 2)
    assert all(c % 2 == 0 for c in d.counts)
    for level in d.levels:
        sols = set(level.assignments)
        assert {s.negate() for s in sols} == sols


def test_poincare_first_empty_level():
    d = build_diagram(backend_for("poincare"), 5)
    assert d.first_empty == 2
    assert d.counts[-1] == 0 and len(d.levels) == 2
    assert extension_report(d, 2) == []
    full = build_diagram(backend_for("poincare"), 4, stop_at_empty=False)
    assert full.counts[1:] == [0, 0, 0]


def test_klein_biorder_report_empty():
    d = build_diagram(backend_for("klein"), 3, mode=PREBIORDER)
    assert d.counts == [0] and d.first_empty == 1
    assert extension_report(d, 1) == []


def test_neighborhood_examples(z2_diagram):
    d = z2_diagram
    assert len(neighborhood_query(d, 1, [((a,), 1)])) == 2
    assert neighborhood_query(d, 1, []) == [0, 1, 2, 3]
    assert neighborhood_query(d, 1, [((a,), 1), ((A,), 1)]) == []
    # constraint given by a non-normal word of the same element
    assert neighborhood_query(d, 2, [((b, a), 1)]) == neighborhood_query(d, 2, [((a, b), 1)])


def test_neighborhood_outside_ball(z2_diagram):
    with pytest.raises(ConstraintOutsideBall):
        neighborhood_query(z2_diagram, 1, [((a, a), 1)])


def test_query_intersection(z2_diagram):
    d = z2_diagram
    level = d.level(3)
    words = [e.nf for e in level.ball.elements[1:12]]
    constraints = [(w, s) for w in words for s in (1, -1)]
    for c1, c2 in itertools.combinations(constraints, 2):
        both = neighborhood_query(d, 3, [c1, c2])
        assert both == sorted(set(neighborhood_query(d, 3, [c1])) & set(neighborhood_query(d, 3, [c2])))


def test_diagram_json(z2_diagram):
    j = z2_diagram.to_json()
    assert j["counts"] == [4, 8, 16]
    assert [m["extensions"] for m in j["restriction_maps"]][0] == extension_report(z2_diagram, 1)
    assert "assignments" not in j["levels"][0]
    assert len(z2_diagram.to_json(with_assignments=True)["levels"][0]["assignments"]) == 4


def test_truncation_marks_partial():
    d = build_diagram(backend_for("z2"), 2, limit=3)
    assert d.partial


def test_bad_range():
    with pytest.raises(ValueError):
        build_diagram(backend_for("z"), 0)
    with pytest.raises(KeyError):
        build_diagram(backend_for("z"), 2).level(5)
