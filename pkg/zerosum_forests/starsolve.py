"""Balanced star centers and copies of forests with a large maximum degree"""

from __future__ import annotations

from math import ceil, floor

import numpy as np

from zerosum_forests.embed import Embedding, ForestPattern, weight
from zerosum_forests.errors import InternalError, PreconditionError
from zerosum_forests.graphcore import (
    EdgeLabeling,
    construct_star_extremal_0mod4,
    construct_star_extremal_1mod4,
    total_weight,
)
from zerosum_forests.lib import log
from zerosum_forests.schemas import StarResult
from zerosum_forests.swapwalk import hill_climb


def star_weights(L: EdgeLabeling) -> np.ndarray:
    """Weight of the spanning star at every vertex, 2·d⁺(v) − (n−1)."""
    return L.matrix.sum(axis=1)


def degree_window(n: int) -> tuple[int, int]:
    """Integer positive degrees d with n/4 ≤ d ≤ 3n/4 − 1."""
    return ceil(n / 4), floor(3 * n / 4 - 1)


def balanced_center(L: EdgeLabeling) -> StarResult:
    """Center whose spanning star has the smallest |weight|, smallest index on ties.

    In a zero-sum labeling the chosen center has its positive degree inside
    the degree window, so |weight| ≤ n/2 − 1.
    """
    if L.n < 2:
        msg = "balanced_center needs n >= 2"
        raise PreconditionError(msg)
    if total_weight(L) != 0:
        msg = "balanced_center needs a zero-sum labeling"
        raise PreconditionError(msg)
    weights = np.abs(star_weights(L))
    center = int(np.argmin(weights))
    pos_degree = L.positive_degree(center)
    lo, hi = degree_window(L.n)
    if not lo <= pos_degree <= hi:
        msg = f"best center {center} has positive degree {pos_degree} outside [{lo}, {hi}]"
        raise InternalError(msg)
    result = StarResult(center=center, abs_weight=int(weights[center]), pos_degree=pos_degree, n=L.n)
    log("SOLVE", "star", f"n={L.n} center={center} abs_weight={result.abs_weight}")
    return result


def extremal_star_profile(n: int) -> list[int]:
    """Star |weight| at every vertex of the extremal construction for n.

    n = 0 mod 4: n/2 − 1 everywhere. n = 1 mod 4: (n−5)/2 at every u_i and at
    v_i for even i, (n−1)/2 at w and at v_i for odd i.
    """
    if n % 4 == 0:
        return [n // 2 - 1] * n
    if n % 4 == 1:
        h = (n - 1) // 2
        low, high = (n - 5) // 2, (n - 1) // 2
        profile = [low] * h
        profile += [low if i % 2 == 0 else high for i in range(1, h + 1)]
        profile.append(high)
        return profile
    msg = f"no extremal construction for n={n}"
    raise PreconditionError(msg)


def verify_extremal(n: int) -> bool:
    """Build the construction for n and check zero-sum plus every star value."""
    L = construct_star_extremal_0mod4(n) if n % 4 == 0 else construct_star_extremal_1mod4(n)
    observed = np.abs(star_weights(L)).tolist()
    ok = total_weight(L) == 0 and observed == extremal_star_profile(n)
    log("CHECK", "extremal", f"n={n} ok={ok}", success=ok)
    return ok


def corollary1_copy(L: EdgeLabeling, F: ForestPattern) -> Embedding:
    """Copy of F with |weight| ≤ n/2 − 1 when Δ(F) ≥ n/2 + 1.

    The max-degree vertex of F sits at a balanced center u. Its incident
    edges either take every minority-sign edge at u together with as many
    majority-sign ones, or split evenly so they sum to at most 1. The rest
    of F is placed in order and then improved by exchanges that keep u's
    incident edge set.

    Raises:
        PreconditionError: Δ(F) < n/2 + 1, size mismatch, or L not zero-sum
        InternalError: the bound failed on the finished copy
    """
    n = L.n
    if F.n != n:
        msg = f"pattern has {F.n} vertices, labeling has {n}"
        raise PreconditionError(msg)
    delta = F.max_degree
    if 2 * delta < n + 2:
        msg = f"needs Δ(F) >= n/2 + 1, got Δ={delta} for n={n}"
        raise PreconditionError(msg)

    u = balanced_center(L).center
    signs = L.signs[u]
    plus = [h for h in range(n) if signs[h] > 0]
    minus = [h for h in range(n) if signs[h] < 0]
    minority, majority = (minus, plus) if len(minus) <= len(plus) else (plus, minus)

    if delta >= 2 * len(minority):
        chosen = minority + majority[: delta - len(minority)]
    else:
        chosen = minority[: delta // 2] + majority[: delta - delta // 2]
    chosen.sort()

    v = F.degrees.index(delta)
    nbrs = F.adjacency[v]
    others = [p for p in range(n) if p != v and p not in set(nbrs)]
    rest = [h for h in range(n) if h != u and h not in set(chosen)]
    mapping = [0] * n
    mapping[v] = u
    for p, h in zip(nbrs, chosen, strict=True):
        mapping[p] = h
    for p, h in zip(others, rest, strict=True):
        mapping[p] = h
    e = Embedding(tuple(mapping))

    pairs = [(a, b) for group in (chosen, rest) for i, a in enumerate(group) for b in group[i + 1 :]]
    floor_ = len(F.edges) % 2
    e, w = hill_climb(L, F, e, done=lambda w: abs(w) <= floor_, key=abs, pairs=pairs)

    if abs(w) > n // 2 - 1 or w != weight(L, F, e):
        msg = f"copy weight {w} exceeds n/2 - 1 = {n // 2 - 1}"
        raise InternalError(msg)
    log("SOLVE", F.name, f"n={n} center={u} weight={w}")
    return e
