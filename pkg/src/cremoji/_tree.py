"""Compiled kernels for CART trees with Gini impurity.

Kept apart from :mod:`cremoji.classifier` so the Python layer stays readable.
All randomness inside a tree comes from a xorshift64* stream seeded by the
caller, which makes tree construction reproducible bit for bit.
"""
import numpy as np
from numba import njit

_EPS = 1e-12


@njit(cache=True, nogil=True)
def _next(state):
    x = state[0]
    x ^= x >> np.uint64(12)
    x ^= x << np.uint64(25)
    x ^= x >> np.uint64(27)
    state[0] = x
    return x * np.uint64(0x2545F4914F6CDD1D)


@njit(cache=True, nogil=True)
def _randbelow(state, n):
    return np.int64(_next(state) % np.uint64(n))


@njit(cache=True, nogil=True)
def _best_split_on(X, y, idx, start, end, f, min_leaf, pos, neg):
    """Best threshold on feature ``f`` for ``idx[start:end]``.

    Returns ``(score, threshold, constant)`` where a larger score is a purer
    split (``sum over children of (p**2 + n**2) / size``) and ``score < 0``
    means no admissible split.
    """
    m = end - start
    vals = np.empty(m)
    for i in range(m):
        vals[i] = X[idx[start + i], f]
    order = np.argsort(vals, kind="mergesort")
    if vals[order[0]] == vals[order[m - 1]]:
        return -1.0, 0.0, True
    best = -1.0
    best_t = 0.0
    lp = 0
    ln = 0
    for i in range(m - 1):
        if y[idx[start + order[i]]] == 1:
            lp += 1
        else:
            ln += 1
        a = vals[order[i]]
        b = vals[order[i + 1]]
        if a == b:
            continue
        nl = i + 1
        nr = m - nl
        if nl < min_leaf or nr < min_leaf:
            continue
        rp = pos - lp
        rn = neg - ln
        score = (lp * lp + ln * ln) / nl + (rp * rp + rn * rn) / nr
        if score > best + _EPS:
            t = a + (b - a) / 2.0
            if t >= b:
                t = a
            best = score
            best_t = t
    return best, best_t, False


@njit(cache=True, nogil=True)
def build_tree(X, y, samples, active, max_features, max_depth, min_leaf, seed):
    """Grow one tree on the rows listed in ``samples`` (with repetition).

    ``active`` holds the candidate feature indices in ascending order;
    ``max_depth < 0`` means unlimited. Returns node arrays
    ``(feature, threshold, left, right, neg, pos)``; leaves have feature -1.
    """
    n = samples.shape[0]
    cap = 2 * n + 1
    feature = np.full(cap, -1, dtype=np.int64)
    threshold = np.zeros(cap)
    left = np.full(cap, -1, dtype=np.int64)
    right = np.full(cap, -1, dtype=np.int64)
    negc = np.zeros(cap, dtype=np.int64)
    posc = np.zeros(cap, dtype=np.int64)

    state = np.empty(1, dtype=np.uint64)
    state[0] = seed
    idx = samples.copy()
    tmp = np.empty(n, dtype=np.int64)
    n_active = active.shape[0]
    feats = np.empty(n_active, dtype=np.int64)

    # stack entries: start, end, depth, node
    stack = np.empty((cap, 4), dtype=np.int64)
    top = 0
    stack[0, 0] = 0
    stack[0, 1] = n
    stack[0, 2] = 0
    stack[0, 3] = 0
    top = 1
    n_nodes = 1

    while top > 0:
        top -= 1
        start = stack[top, 0]
        end = stack[top, 1]
        depth = stack[top, 2]
        node = stack[top, 3]
        pos = 0
        for i in range(start, end):
            pos += y[idx[i]]
        neg = (end - start) - pos
        posc[node] = pos
        negc[node] = neg
        m = end - start
        if pos == 0 or neg == 0 or m < 2 * min_leaf:
            continue
        if max_depth >= 0 and depth >= max_depth:
            continue

        parent = (pos * pos + neg * neg) / m
        best = parent + _EPS
        best_f = -1
        best_t = 0.0
        for j in range(n_active):
            feats[j] = active[j]
        visited = 0
        j = 0
        while j < n_active and visited < max_features:
            r = j + _randbelow(state, n_active - j)
            f = feats[r]
            feats[r] = feats[j]
            feats[j] = f
            j += 1
            score, t, constant = _best_split_on(X, y, idx, start, end, f, min_leaf, pos, neg)
            if constant:
                continue
            visited += 1
            if score > best + _EPS:
                best, best_f, best_t = score, f, t
            elif best_f >= 0 and abs(score - best) <= _EPS:
                if f < best_f or (f == best_f and t < best_t):
                    best_f, best_t = f, t
        if best_f < 0:
            continue

        # stable partition of idx[start:end]
        nl = 0
        for i in range(start, end):
            if X[idx[i], best_f] <= best_t:
                tmp[nl] = idx[i]
                nl += 1
        k = nl
        for i in range(start, end):
            if X[idx[i], best_f] > best_t:
                tmp[k] = idx[i]
                k += 1
        for i in range(m):
            idx[start + i] = tmp[i]

        feature[node] = best_f
        threshold[node] = best_t
        left[node] = n_nodes
        right[node] = n_nodes + 1
        stack[top, 0] = start + nl
        stack[top, 1] = end
        stack[top, 2] = depth + 1
        stack[top, 3] = n_nodes + 1
        top += 1
        stack[top, 0] = start
        stack[top, 1] = start + nl
        stack[top, 2] = depth + 1
        stack[top, 3] = n_nodes
        top += 1
        n_nodes += 2

    return (
        feature[:n_nodes].copy(),
        threshold[:n_nodes].copy(),
        left[:n_nodes].copy(),
        right[:n_nodes].copy(),
        negc[:n_nodes].copy(),
        posc[:n_nodes].copy(),
    )


@njit(cache=True, nogil=True)
def predict_tree(X, feature, threshold, left, right, neg, pos):
    """Positive-class leaf frequency for every row of ``X``."""
    out = np.empty(X.shape[0])
    for i in range(X.shape[0]):
        node = 0
        while feature[node] >= 0:
            if X[i, feature[node]] <= threshold[node]:
                node = left[node]
            else:
                node = right[node]
        out[i] = pos[node] / (pos[node] + neg[node])
    return out
