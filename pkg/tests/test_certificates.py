import json

import pytest

from conftest import backend_for, load
from mutations import ball_inverses, mutations
from ordlab.ball import build_ball
from ordlab.certificates import (
    CertificateError,
    Leaf,
    Node,
    RefutationCertificate,
    WitnessTerm,
    check_certificate,
    involution_certificate,
)
from ordlab.presentation import parse_presentation
from ordlab.solver import find_prebiorder, find_preorder
from ordlab.wordproblem import WordBackend, get_backend, todd_coxeter

KLEIN_TREE = {
    "pair": "y",
    "pos": {"witness": [{"base": "y", "conj": "x"}, {"base": "y"}]},
    "neg": {"witness": [{"base": "Y", "conj": "x"}, {"base": "Y"}]},
}


@pytest.fixture(scope="module")
def klein():
    bl = build_ball(backend_for("klein"), 1)
    return bl, find_prebiorder(bl).certificate


@pytest.fixture(scope="module")
def z5():
    bk = get_backend(parse_presentation("gens: x\nrels: xxxxx"))
    return build_ball(bk, 2)


def accepts(ball, data):
    try:
        cert = RefutationCertificate.from_json(data)
    except CertificateError:
        return False
    try:
        return check_certificate(ball.backend, ball, cert)
    except CertificateError:
        return False


def test_klein_certificate_shape(klein):
    bl, cert = klein
    assert cert.kind == "prebiorder" and cert.radius == 1
    assert cert.to_json()["tree"] == KLEIN_TREE
    assert check_certificate(bl.backend, bl, cert)


def test_klein_leaf_product_is_conjugation_relation(klein):
    bl, cert = klein
    leaf = cert.tree.pos
    x, y = bl.presentation.word("x"), bl.presentation.word("y")
    (b1, c1), (b2, c2) = leaf.witness
    assert (b1, c1, b2, c2) == (y, x, y, None)
    expanded = bl.presentation.word("Xyxy")
    assert bl.backend.normal_form(expanded) == ()


def test_round_trip_is_bit_exact(klein):
    _, cert = klein
    text = cert.dumps()
    again = RefutationCertificate.loads(text)
    assert again.dumps() == text
    assert json.loads(text)["group"] == "gens: x, y\nrels: Xyxy\n"


def test_involution_certificate(poincare_tc):
    bl = build_ball(poincare_tc, 3)
    g = bl.involutions[0]
    cert = involution_certificate(bl, g)
    assert cert.kind == "involution"
    assert len(cert.tree.witness) == 2
    assert check_certificate(poincare_tc, bl, cert)
    # a non-involution in the same slot fails
    other = next(e.id for e in bl.elements[1:] if e.inverse_id != e.id)
    assert not check_certificate(poincare_tc, bl, involution_certificate(bl, other))


def test_poincare_certificate_checks_via_coset_table(poincare_tc):
    kb_ball = build_ball(backend_for("poincare"), 2)
    cert = find_preorder(kb_ball).certificate
    assert cert.kind == "preorder"
    tc_ball = build_ball(poincare_tc, 2)
    assert check_certificate(poincare_tc, tc_ball, cert)
    for leaf in cert.leaves():
        assert all(t.conj is None for t in leaf.witness)


def test_deleting_a_witness_term_rejects(klein):
    bl, cert = klein
    data = cert.to_json()
    del data["tree"]["pos"]["witness"][1]
    assert not accepts(bl, data)


def test_conjugator_in_preorder_certificate_rejects(klein):
    bl, cert = klein
    data = cert.to_json()
    data["kind"] = "preorder"
    assert not accepts(bl, data)


def test_wrong_radius_rejects(klein):
    bl, cert = klein
    data = cert.to_json()
    data["radius"] = 2
    assert not accepts(bl, data)


def test_wrong_presentation_rejects(klein):
    _, cert = klein
    z2 = build_ball(backend_for("z2"), 1)
    assert not accepts(z2, cert.to_json())


def test_pair_decided_twice_rejects(klein):
    bl, cert = klein
    data = cert.to_json()
    data["tree"] = {"pair": "Y", "pos": data["tree"], "neg": data["tree"]}
    assert not accepts(bl, data)


def test_dangling_element_raises(klein):
    bl, cert = klein
    data = cert.to_json()
    data["tree"]["pos"]["witness"].append({"base": "xxxx"})
    with pytest.raises(CertificateError):
        check_certificate(bl.backend, bl, RefutationCertificate.from_json(data))


@pytest.mark.parametrize("text", [
    "", "[]", "{", '{"kind": "preorder"}',
    '{"kind": "bogus", "radius": 1, "group": "gens: x\\nrels:", "tree": {"witness": []}}',
    '{"kind": "preorder", "radius": 0, "group": "gens: x\\nrels:", "tree": {"witness": []}}',
    '{"kind": "preorder", "radius": 1, "group": "gens: x\\nrels:", "tree": {"pair": "x"}}',
    '{"kind": "preorder", "radius": 1, "group": "gens: x\\nrels:", "tree": {"witness": [{"base": "q"}]}}',
    '{"kind": "preorder", "radius": 1, "group": "gens: 1\\nrels:", "tree": {"witness": []}}',
])
def test_malformed_certificates(text):
    with pytest.raises(CertificateError):
        RefutationCertificate.loads(text)


def test_z5_solver_certificate(z5):
    out = find_preorder(z5)
    assert out.status == "unsat"
    assert check_certificate(z5.backend, z5, out.certificate)


def _cert(ball, tree):
    return RefutationCertificate("preorder", 2, ball.presentation, tree)


def test_partial_tree_with_valid_leaves_accepts(z5):
    w = z5.presentation.word
    tree = Node(w("x"), Leaf([WitnessTerm(w("x"))] * 5), Leaf([WitnessTerm(w("X"))] * 5))
    assert check_certificate(z5.backend, z5, _cert(z5, tree))


def test_partial_tree_with_undecided_leaf_rejects(z5):
    w = z5.presentation.word
    # x * x * (xx)^-1 = 1 but XX was never decided positive
    tree = Node(w("x"), Leaf([WitnessTerm(w("x")), WitnessTerm(w("x")), WitnessTerm(w("XX"))]),
                Leaf([WitnessTerm(w("X"))] * 5))
    assert not check_certificate(z5.backend, z5, _cert(z5, tree))
    full = Node(w("x"),
                Node(w("xx"), Leaf([WitnessTerm(w("xx")), WitnessTerm(w("xx")), WitnessTerm(w("x"))]),
                     Leaf([WitnessTerm(w("x")), WitnessTerm(w("x")), WitnessTerm(w("XX"))])),
                Leaf([WitnessTerm(w("X"))] * 5))
    assert check_certificate(z5.backend, z5, _cert(z5, full))


def test_empty_witness_rejects(z5):
    assert not check_certificate(z5.backend, z5, _cert(z5, Leaf([])))


def _fuzz(ball, cert, count, seed):
    data = cert.to_json()
    survivors = [m for m in mutations(data, ball_inverses(ball), count, seed) if accepts(ball, m)]
    return survivors


def test_fuzz_klein(klein):
    bl, cert = klein
    assert _fuzz(bl, cert, 100, seed=1) == []


def test_fuzz_poincare():
    bl = build_ball(backend_for("poincare"), 2)
    cert = find_preorder(bl).certificate
    assert _fuzz(bl, cert, 100, seed=2) == []


def test_fuzz_z5(z5):
    cert = find_preorder(z5).certificate
    assert _fuzz(z5, cert, 100, seed=3) == []


def test_fuzz_involution(poincare_tc):
    bl = build_ball(poincare_tc, 3)
    assert _fuzz(bl, involution_certificate(bl, bl.involutions[0]), 100, seed=4) == []
