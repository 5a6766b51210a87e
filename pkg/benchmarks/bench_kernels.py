"""Numba vs numpy timings for the ball and brute-force kernels.

    python3 benchmarks/bench_kernels.py [--repeat N]

Each kernel is run once untimed so numba compilation (or cache loading) is
excluded, then timed as the best of ``--repeat`` runs.  Outputs of the two
paths are compared before timing.
"""

import argparse
import time
from pathlib import Path

import numpy as np

from ordlab import kernels
from ordlab.ball import _bfs, build_ball
from ordlab.presentation import parse_presentation
from ordlab.wordproblem import get_backend

PRES = Path(__file__).resolve().parent.parent / "presentations"


def backend(name):
    return get_backend(parse_presentation((PRES / f"{name}.pres").read_text()))


def ball_inputs(name, k):
    bk = backend(name)
    ball = build_ball(bk, k)
    _, _, table, *_ = _bfs(bk, 2 * k, 10**7, "halo_cap")
    words = np.zeros((len(ball), k), dtype=np.int64)
    for i, w in enumerate(ball.geodesics):
        words[i, :len(w)] = w
    return ball, table, words


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases():
    for name, k in (("f2", 4), ("z3", 6), ("klein", 10)):
        ball, table, words = ball_inputs(name, k)
        n = len(ball)
        M = kernels.product_matrix(table, words, ball.lengths, use_numba=False)
        yield (f"product_matrix {name} k={k} (n={n})",
               lambda nb, t=table, w=words, l=ball.lengths: kernels.product_matrix(t, w, l, use_numba=nb))
        yield (f"product_triples {name} k={k}", lambda nb, M=M, n=n: kernels.product_triples(M, n, use_numba=nb))
        yield (f"conjugation_triples {name} k={k}",
               lambda nb, M=M, n=n: kernels.conjugation_triples(M, n, use_numba=nb))
    for name, k in (("z2", 3), ("klein", 3)):
        ball = build_ball(backend(name), k)
        reps = np.array([p[0] for p in ball.pairs])
        invs = np.array([p[1] for p in ball.pairs])
        args = (len(reps), reps, invs, len(ball), ball.product_triples, ball.conj_triples)
        yield (f"brute_force_valid {name} k={k} (2^{len(reps)} patterns)",
               lambda nb, a=args: kernels.brute_force_valid(*a, use_numba=nb))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not kernels.NUMBA_AVAILABLE:
        raise SystemExit("numba is not installed")
    print(f"numba threads: {kernels.configure_threads()}")
    print(f"{'kernel':52s} {'numpy':>10s} {'numba':>10s} {'speedup':>8s}")
    for label, fn in cases():
        a, b = fn(False), fn(True)
        assert np.array_equal(a, b), label
        t_np = best_of(lambda: fn(False), args.repeat)
        t_nb = best_of(lambda: fn(True), args.repeat)
        print(f"{label:52s} {t_np * 1e3:9.2f}ms {t_nb * 1e3:9.2f}ms {t_np / t_nb:7.1f}x")


if __name__ == "__main__":
    main()
