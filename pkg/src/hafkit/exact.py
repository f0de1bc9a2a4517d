"""Exact hafnian and perfect-matching oracles for small dimensions.

The hafnian is computed by dynamic programming over vertex subsets: with
``i`` the lowest remaining vertex,

    haf(A, S) = sum over j in S, j != i of A[i, j] * haf(A, S \\ {i, j}).

The table is staged by subset popcount and every stage is evaluated with
vectorized gathers, so the default cap of n = 24 (a 16M-entry table) runs
in seconds.  For 0/1 inputs up to that cap all intermediate values are
integers below 2^53, so counts are exact.

Perfect-matching existence is decided separately by an augmenting-path
matcher with blossom contraction, usable far beyond the hafnian cap.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .graphs import GraphEdgeList
from .linalg import SymMatrix

__all__ = [
    "HafnianValue",
    "hafnian_exact",
    "count_perfect_matchings",
    "matching_exists",
    "DEFAULT_CAP",
]

DEFAULT_CAP = 24

# float64 stays exact for integer values below 2^53; above ~1e300 exp overflows
_MAX_EXACT_LOG = 700.0


@dataclass(frozen=True)
class HafnianValue:
    """Hafnian in log form, with the plain value when it is representable."""

    log_value: float
    value_if_small: float | None
    n: int

    def is_zero(self) -> bool:
        return self.log_value == -math.inf


def _popcounts(masks: np.ndarray) -> np.ndarray:
    # SWAR popcount on int64 masks (n <= 24 so 32 bits suffice, 64 used anyway)
    v = masks.astype(np.uint64)
    v = v - ((v >> np.uint64(1)) & np.uint64(0x5555555555555555))
    v = (v & np.uint64(0x3333333333333333)) + ((v >> np.uint64(2)) & np.uint64(0x3333333333333333))
    v = (v + (v >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return ((v * np.uint64(0x0101010101010101)) >> np.uint64(56)).astype(np.int64)


def _hafnian_dp(a: np.ndarray) -> float:
    """Subset-DP hafnian of a dense symmetric matrix with zero diagonal."""
    n = a.shape[0]
    full = 1 << n
    table = np.zeros(full)
    table[0] = 1.0
    masks_all = np.arange(full, dtype=np.int64)
    pc = _popcounts(masks_all)
    for p in range(2, n + 1, 2):
        masks = masks_all[pc == p]
        low = masks & -masks
        low_idx = np.log2(low.astype(np.float64)).astype(np.int64)
        acc = np.zeros(masks.shape[0])
        for j in range(1, n):
            sel = (((masks >> j) & 1) == 1) & (low_idx != j)
            if not np.any(sel):
                continue
            sub = masks[sel] ^ low[sel] ^ (1 << j)
            acc[sel] += a[low_idx[sel], j] * table[sub]
        table[masks] = acc
    return float(table[full - 1])


def hafnian_exact(a: SymMatrix, cap: int = DEFAULT_CAP) -> HafnianValue:
    """Exact hafnian of a nonnegative symmetric matrix of even dimension.

    For a 0/1 adjacency matrix this is the number of perfect matchings.
    Dimensions above ``cap`` are refused (the table is 2^n entries).  When
    entries are large enough that the raw DP could overflow, the matrix is
    normalized by its maximum entry and only the log value is guaranteed;
    otherwise the plain value is exact-in-float.
    """
    a.require_even()
    n = a.n
    if n > cap:
        raise InputError(f"hafnian cap is {cap}, got n={n}")
    m = n // 2
    c = float(a.entries.max())
    if c == 0.0:
        return HafnianValue(log_value=-math.inf, value_if_small=0.0, n=n)
    # (n-1)!! bounds the number of terms; worst-case magnitude c^m * (n-1)!!
    log_worst = m * math.log(c) + math.lgamma(n) - math.lgamma(m) - (m - 1) * math.log(2.0)
    if log_worst < _MAX_EXACT_LOG:
        val = _hafnian_dp(a.entries)
        if val == 0.0:
            return HafnianValue(log_value=-math.inf, value_if_small=0.0, n=n)
        return HafnianValue(log_value=math.log(val), value_if_small=val, n=n)
    scaled = _hafnian_dp(a.entries / c)
    if scaled == 0.0:
        return HafnianValue(log_value=-math.inf, value_if_small=0.0, n=n)
    log_value = math.log(scaled) + m * math.log(c)
    value = math.exp(log_value) if log_value < _MAX_EXACT_LOG else None
    return HafnianValue(log_value=log_value, value_if_small=value, n=n)


def count_perfect_matchings(g: GraphEdgeList, cap: int = DEFAULT_CAP) -> HafnianValue:
    """Number of perfect matchings of a simple graph (hafnian of its adjacency)."""
    if g.n % 2 != 0:
        raise InputError(f"perfect matchings need an even vertex count, got n={g.n}")
    return hafnian_exact(g.sym_matrix(), cap=cap)


def _max_matching(n: int, adj: list[set]) -> list[int]:
    """Maximum matching in a general graph (augmenting paths + blossoms)."""
    match = [-1] * n
    parent = [-1] * n
    base = list(range(n))
    in_queue = [False] * n
    in_blossom = [False] * n

    def lca(a: int, b: int) -> int:
        used = [False] * n
        x = a
        while True:
            x = base[x]
            used[x] = True
            if match[x] == -1:
                break
            x = parent[match[x]]
        y = b
        while True:
            y = base[y]
            if used[y]:
                return y
            y = parent[match[y]]

    def mark_path(v: int, b: int, child: int):
        while base[v] != b:
            in_blossom[base[v]] = True
            in_blossom[base[match[v]]] = True
            parent[v] = child
            child = match[v]
            v = parent[match[v]]

    def find_path(root: int) -> bool:
        for i in range(n):
            parent[i] = -1
            base[i] = i
            in_queue[i] = False
        q = deque([root])
        in_queue[root] = True
        while q:
            v = q.popleft()
            for to in adj[v]:
                if base[v] == base[to] or match[v] == to:
                    continue
                if to == root or (match[to] != -1 and parent[match[to]] != -1):
                    cur = lca(v, to)
                    for i in range(n):
                        in_blossom[i] = False
                    mark_path(v, cur, to)
                    mark_path(to, cur, v)
                    for i in range(n):
                        if in_blossom[base[i]]:
                            base[i] = cur
                            if not in_queue[i]:
                                in_queue[i] = True
                                q.append(i)
                elif parent[to] == -1:
                    parent[to] = v
                    if match[to] == -1:
                        # augment along the alternating path ending at `to`
                        while to != -1:
                            prev = parent[to]
                            nxt = match[prev]
                            match[prev] = to
                            match[to] = prev
                            to = nxt
                        return True
                    if not in_queue[match[to]]:
                        in_queue[match[to]] = True
                        q.append(match[to])
        return False

    for v in range(n):
        if match[v] == -1:
            find_path(v)
    return match


def matching_exists(g: GraphEdgeList) -> bool:
    """True iff the graph has a perfect matching (no count, so large n is fine)."""
    if g.n % 2 != 0:
        raise InputError(f"perfect matchings need an even vertex count, got n={g.n}")
    match = _max_matching(g.n, g.adjacency_sets())
    return all(m != -1 for m in match)
