import os
import subprocess
import sys

import numpy as np
import pytest

from conftest import backend_for
from ordlab import kernels
from ordlab.ball import _bfs, build_ball

pytestmark = pytest.mark.skipif(not kernels.NUMBA_AVAILABLE, reason="numba not installed")


def _inputs(name, k):
    bk = backend_for(name)
    ball = build_ball(bk, k)
    nfs, layers, table, *_ = _bfs(bk, 2 * k, 10**6, "halo_cap")
    n = len(ball)
    words = np.zeros((n, k), dtype=np.int64)
    for i, w in enumerate(ball.geodesics):
        words[i, :len(w)] = w
    return ball, table, words, ball.lengths


@pytest.mark.parametrize("name,k", [("z2", 3), ("klein", 3), ("f2", 3), ("poincare", 4)])
def test_numba_matches_numpy(name, k):
    ball, table, words, lengths = _inputs(name, k)
    n = len(ball)
    M_nb = kernels.product_matrix(table, words, lengths, use_numba=True)
    M_np = kernels.product_matrix(table, words, lengths, use_numba=False)
    assert np.array_equal(M_nb, M_np)
    for fn in (kernels.product_triples, kernels.conjugation_triples):
        assert np.array_equal(fn(M_nb, n, use_numba=True), fn(M_np, n, use_numba=False))


@pytest.mark.parametrize("name,k", [("z2", 2), ("klein", 2), ("poincare", 2)])
def test_brute_force_kernels_agree(name, k):
    ball = build_ball(backend_for(name), k)
    reps = np.array([p[0] for p in ball.pairs])
    invs = np.array([p[1] for p in ball.pairs])
    for ctrip in (None, ball.conj_triples):
        args = (len(reps), reps, invs, len(ball), ball.product_triples, ctrip)
        assert np.array_equal(kernels.brute_force_valid(*args, use_numba=True),
                              kernels.brute_force_valid(*args, use_numba=False))


def test_batch_valid_agrees():
    ball = build_ball(backend_for("klein"), 2)
    rng = np.random.default_rng(0)
    signs = np.zeros((300, len(ball)), dtype=np.int8)
    for row in signs:
        for rep, inv in ball.pairs:
            v = rng.choice((-1, 1))
            row[rep], row[inv] = v, -v
    for ctrip in (None, ball.conj_triples):
        a = kernels.batch_valid(signs, ball.product_triples, ctrip, use_numba=True)
        b = kernels.batch_valid(signs, ball.product_triples, ctrip, use_numba=False)
        assert np.array_equal(a, b)


def test_too_many_pairs():
    with pytest.raises(ValueError):
        kernels.brute_force_valid(31, np.zeros(31), np.zeros(31), 63, np.zeros((0, 3)))


def test_numpy_path_via_environment():
    code = ("from ordlab import kernels, build_ball, get_backend, parse_presentation;"
            "assert not kernels.USE_NUMBA;"
            "b = build_ball(get_backend(parse_presentation('gens: a, b\\nrels: abAB')), 2);"
            "print(len(b), len(b.product_triples), len(b.conj_triples))")
    env = dict(os.environ, ORDLAB_NUMBA="0")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    ball = build_ball(backend_for("z2"), 2)
    assert out.stdout.split() == [str(len(ball)), str(len(ball.product_triples)), str(len(ball.conj_triples))]


def test_thread_configuration():
    assert kernels.configure_threads("1") == 1
    assert kernels.configure_threads("0") >= 1
