"""Independent brute-force oracles used to validate the package.

Everything here is deliberately written from scratch against the plain
definitions (pairing enumeration, subset scans with their own BFS), not by
calling into hafkit internals, so agreement is meaningful.
"""

import itertools

import numpy as np


def naive_hafnian(a: np.ndarray) -> float:
    """Hafnian by direct enumeration of all (n-1)!! pairings."""
    n = a.shape[0]
    assert n % 2 == 0

    def rec(idx):
        if not idx:
            return 1.0
        i = idx[0]
        total = 0.0
        for t in range(1, len(idx)):
            j = idx[t]
            rest = idx[1:t] + idx[t + 1:]
            total += a[i, j] * rec(rest)
        return total

    return rec(tuple(range(n)))


def naive_pfaffian(w: np.ndarray) -> float:
    """Pfaffian as a signed sum over perfect pairings of [n]."""
    n = w.shape[0]
    if n % 2 == 1:
        return 0.0

    def rec(idx, acc_sign):
        if not idx:
            return acc_sign
        total = 0.0
        i = idx[0]
        for t in range(1, len(idx)):
            j = idx[t]
            rest = idx[1:t] + idx[t + 1:]
            sign = -1.0 if (t - 1) % 2 else 1.0
            total += w[i, j] * rec(rest, acc_sign * sign)
        return total

    return rec(tuple(range(n)), 1.0)


def _brute_boundary(adj, js):
    out = set()
    for v in js:
        out |= adj[v]
    return out - js


def _brute_components(adj, js):
    seen = set()
    comps = 0
    for s in js:
        if s in seen:
            continue
        comps += 1
        stack = [s]
        seen.add(s)
        while stack:
            v = stack.pop()
            for w in adj[v] & js:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
    return comps


def brute_expansion(n, edges, kappa, level, delta=0.0):
    """(holds, witness) for the expansion inequality by scanning all subsets."""
    adj = {v: set() for v in range(n)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    for k in range(1, level + 1):
        for js in itertools.combinations(range(n), k):
            js = set(js)
            lhs = len(_brute_boundary(adj, js)) - (1.0 - delta) * _brute_components(adj, js)
            if lhs < kappa * len(js):
                return False, tuple(sorted(js))
    return True, None


def random_symmetric01(rng, n, p=0.5) -> np.ndarray:
    a = np.zeros((n, n))
    iu = np.triu_indices(n, 1)
    vals = (rng.random(iu[0].size) < p).astype(float)
    a[iu] = vals
    a += a.T
    return a


def random_graph_with_matching(rng, n, extra_p=0.3):
    """Random graph guaranteed to contain a perfect matching in its support."""
    perm = rng.permutation(n)
    edges = {(min(int(perm[2 * t]), int(perm[2 * t + 1])), max(int(perm[2 * t]), int(perm[2 * t + 1]))) for t in range(n // 2)}
    iu = np.triu_indices(n, 1)
    for i, j in zip(iu[0], iu[1]):
        if rng.random() < extra_p:
            edges.add((int(i), int(j)))
    return edges


def scalable_graph(rng, n, extra_p=0.4):
    """Random graph in which every edge lies in some perfect matching.

    Start from a perfect matching plus random edges, then drop any edge
    whose removal of its endpoints leaves a graph with no perfect matching
    (checked by pairing enumeration).  Dropping such edges does not change
    the matching set, so one pass suffices.
    """
    edges = random_graph_with_matching(rng, n, extra_p)
    a = np.zeros((n, n))
    for u, v in edges:
        a[u, v] = a[v, u] = 1.0
    kept = set()
    for u, v in edges:
        rest = [k for k in range(n) if k not in (u, v)]
        minor = a[np.ix_(rest, rest)]
        if n == 2 or naive_hafnian(minor) > 0:
            kept.add((u, v))
    return kept


def random_skew(rng, n, zero_frac=0.0) -> np.ndarray:
    w = np.zeros((n, n))
    iu = np.triu_indices(n, 1)
    vals = rng.normal(size=iu[0].size)
    if zero_frac > 0:
        vals[rng.random(vals.size) < zero_frac] = 0.0
    w[iu] = vals
    w -= w.T
    return w
