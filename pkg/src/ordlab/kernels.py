"""Integer-array kernels behind the ball builder and the validity checks.

Every kernel has a numba version and a numpy version with identical output.
Set ``ORDLAB_NUMBA=0`` to force the numpy path.  ``ORDLAB_THREADS`` caps the
numba thread pool (0 or unset means numba's default).
"""

from __future__ import annotations

import os

import numpy as np

# numba tries TBB first and warns when it is too old; workqueue needs nothing
os.environ.setdefault("NUMBA_THREADING_LAYER", "workqueue")

try:
    import numba
    from numba import njit, prange
except ImportError:  # pragma: no cover
    numba = None

NUMBA_AVAILABLE = numba is not None
USE_NUMBA = NUMBA_AVAILABLE and os.environ.get("ORDLAB_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")


def configure_threads(value: str | None = None) -> int:
    """Apply ``ORDLAB_THREADS`` (or ``value``).  Returns the thread count in use."""
    if not USE_NUMBA:
        return 1
    raw = os.environ.get("ORDLAB_THREADS", "0") if value is None else value
    try:
        n = int(raw)
    except ValueError:
        n = 0
    cap = numba.config.NUMBA_NUM_THREADS
    numba.set_num_threads(cap if n <= 0 else min(n, cap))
    return numba.get_num_threads()


# ---------------------------------------------------------------------------
# numpy implementations

def _product_matrix_np(table, words, lengths):
    n = words.shape[0]
    cur = np.repeat(np.arange(n, dtype=np.int64)[:, None], n, axis=1)
    for t in range(words.shape[1] if words.ndim == 2 else 0):
        live = np.nonzero(lengths > t)[0]
        if live.size == 0:
            break
        cur[:, live] = table[cur[:, live], words[live, t][None, :]]
    return cur


def _product_triples_np(M, n):
    sub = M[1:n, 1:n]
    g, h = np.nonzero((sub < n) & (sub != 0))
    return np.stack([g + 1, h + 1, sub[g, h]], axis=1).astype(np.int64)


def _conjugation_triples_np(M, n):
    out = []
    qs = np.arange(1, n, dtype=np.int64)
    for g in range(n):
        row = M[g, :n]
        order = np.argsort(row, kind="stable")
        vals = row[order]
        target = M[1:n, g]
        idx = np.searchsorted(vals, target)
        idx_c = np.minimum(idx, n - 1)
        hit = (idx < n) & (vals[idx_c] == target)
        c = order[idx_c]
        keep = hit & (c != 0)
        k = int(keep.sum())
        if k:
            block = np.empty((k, 3), dtype=np.int64)
            block[:, 0] = g
            block[:, 1] = qs[keep]
            block[:, 2] = c[keep]
            out.append(block)
    if not out:
        return np.empty((0, 3), dtype=np.int64)
    return np.concatenate(out)


def _batch_valid_np(signs, ptrip, ctrip):
    ok = np.ones(signs.shape[0], dtype=np.bool_)
    if ptrip.shape[0]:
        g, h, f = ptrip[:, 0], ptrip[:, 1], ptrip[:, 2]
        bad = (signs[:, g] > 0) & (signs[:, h] > 0) & (signs[:, f] < 0)
        ok &= ~bad.any(axis=1)
    if ctrip.shape[0]:
        q, c = ctrip[:, 1], ctrip[:, 2]
        bad = (signs[:, q] > 0) & (signs[:, c] < 0)
        ok &= ~bad.any(axis=1)
    return ok


def _patterns_to_signs_np(patterns, reps, invs, n):
    bits = ((patterns[:, None] >> np.arange(reps.size, dtype=np.int64)[None, :]) & 1).astype(np.int8)
    vals = 1 - 2 * bits
    signs = np.zeros((patterns.size, n), dtype=np.int8)
    signs[:, reps] = vals
    signs[:, invs] = -vals
    return signs


def _brute_force_np(n_pairs, reps, invs, n, ptrip, ctrip, chunk=1 << 14):
    total = 1 << n_pairs
    out = np.zeros(total, dtype=np.bool_)
    for start in range(0, total, chunk):
        pats = np.arange(start, min(total, start + chunk), dtype=np.int64)
        out[start:start + pats.size] = _batch_valid_np(_patterns_to_signs_np(pats, reps, invs, n), ptrip, ctrip)
    return out


# ---------------------------------------------------------------------------
# numba implementations

if NUMBA_AVAILABLE:

    @njit(parallel=True, cache=True)
    def _product_matrix_nb(table, words, lengths):
        n = words.shape[0]
        M = np.empty((n, n), dtype=np.int64)
        for g in prange(n):
            for h in range(n):
                cur = np.int64(g)
                for t in range(lengths[h]):
                    cur = table[cur, words[h, t]]
                M[g, h] = cur
        return M

    @njit(cache=True)
    def _product_triples_nb(M, n):
        count = 0
        for g in range(1, n):
            for h in range(1, n):
                f = M[g, h]
                if f < n and f != 0:
                    count += 1
        out = np.empty((count, 3), dtype=np.int64)
        k = 0
        for g in range(1, n):
            for h in range(1, n):
                f = M[g, h]
                if f < n and f != 0:
                    out[k, 0] = g
                    out[k, 1] = h
                    out[k, 2] = f
                    k += 1
        return out

    @njit(parallel=True, cache=True)
    def _conj_match_nb(M, n):
        # match[g, q] = c with g^-1 q g = c, or -1
        match = np.full((n, n), -1, dtype=np.int64)
        for g in prange(n):
            row = M[g, :n].copy()
            order = np.argsort(row, kind="mergesort")
            vals = row[order]
            for q in range(1, n):
                target = M[q, g]
                i = np.searchsorted(vals, target)
                if i < n and vals[i] == target:
                    c = order[i]
                    if c != 0:
                        match[g, q] = c
        return match

    def _conjugation_triples_nb(M, n):
        match = _conj_match_nb(M, n)
        g, q = np.nonzero(match >= 0)
        return np.stack([g, q, match[g, q]], axis=1).astype(np.int64)

    @njit(parallel=True, cache=True)
    def _batch_valid_nb(signs, ptrip, ctrip):
        B = signs.shape[0]
        ok = np.ones(B, dtype=np.bool_)
        for b in prange(B):
            s = signs[b]
            for t in range(ptrip.shape[0]):
                if s[ptrip[t, 0]] > 0 and s[ptrip[t, 1]] > 0 and s[ptrip[t, 2]] < 0:
                    ok[b] = False
                    break
            if ok[b]:
                for t in range(ctrip.shape[0]):
                    if s[ctrip[t, 1]] > 0 and s[ctrip[t, 2]] < 0:
                        ok[b] = False
                        break
        return ok

    @njit(parallel=True, cache=True)
    def _brute_force_nb(n_pairs, reps, invs, n, ptrip, ctrip):
        total = 1 << n_pairs
        out = np.zeros(total, dtype=np.bool_)
        for p in prange(total):
            s = np.zeros(n, dtype=np.int8)
            for i in range(n_pairs):
                v = 1 - 2 * ((p >> i) & 1)
                s[reps[i]] = v
                s[invs[i]] = -v
            good = True
            for t in range(ptrip.shape[0]):
                if s[ptrip[t, 0]] > 0 and s[ptrip[t, 1]] > 0 and s[ptrip[t, 2]] < 0:
                    good = False
                    break
            if good:
                for t in range(ctrip.shape[0]):
                    if s[ctrip[t, 1]] > 0 and s[ctrip[t, 2]] < 0:
                        good = False
                        break
            out[p] = good
        return out


# ---------------------------------------------------------------------------
# dispatch

def _i64(a):
    return np.ascontiguousarray(a, dtype=np.int64)


def product_matrix(table, words, lengths, use_numba=None):
    """``M[g, h]`` = id reached from ``g`` by walking ``words[h]`` through ``table``."""
    table, words, lengths = _i64(table), _i64(words), _i64(lengths)
    if words.ndim != 2:
        words = words.reshape(lengths.size, -1)
    if USE_NUMBA if use_numba is None else use_numba:
        return _product_matrix_nb(table, words, lengths)
    return _product_matrix_np(table, words, lengths)


def product_triples(M, n, use_numba=None):
    """All ``(g, h, g*h)`` with every entry a non-identity id below ``n``, row-major."""
    M = _i64(M)
    if USE_NUMBA if use_numba is None else use_numba:
        return _product_triples_nb(M, n)
    return _product_triples_np(M, n)


def conjugation_triples(M, n, use_numba=None):
    """All ``(g, q, c)`` with ``g^-1 q g = c``, ``q, c`` non-identity, row-major in ``(g, q)``."""
    M = _i64(M)
    if USE_NUMBA if use_numba is None else use_numba:
        return _conjugation_triples_nb(M, n)
    return _conjugation_triples_np(M, n)


def batch_valid(signs, ptrip, ctrip=None, use_numba=None):
    signs = np.ascontiguousarray(np.atleast_2d(signs), dtype=np.int8)
    ptrip = _i64(ptrip).reshape(-1, 3)
    ctrip = np.empty((0, 3), dtype=np.int64) if ctrip is None else _i64(ctrip).reshape(-1, 3)
    if USE_NUMBA if use_numba is None else use_numba:
        return _batch_valid_nb(signs, ptrip, ctrip)
    return _batch_valid_np(signs, ptrip, ctrip)


def brute_force_valid(n_pairs, reps, invs, n, ptrip, ctrip=None, use_numba=None):
    """Validity of every sign pattern; bit ``i`` set means pair ``i``'s representative is negative."""
    if n_pairs > 30:
        raise ValueError("too many pairs for exhaustive search")
    reps, invs = _i64(reps), _i64(invs)
    ptrip = _i64(ptrip).reshape(-1, 3)
    ctrip = np.empty((0, 3), dtype=np.int64) if ctrip is None else _i64(ctrip).reshape(-1, 3)
    if USE_NUMBA if use_numba is None else use_numba:
        return _brute_force_nb(n_pairs, reps, invs, n, ptrip, ctrip)
    return _brute_force_np(n_pairs, reps, invs, n, ptrip, ctrip)
