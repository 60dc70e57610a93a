"""Walks between copies of a forest by exchanging the roles of host vertices.

Each exchange that involves a pattern vertex of degree at most one changes at
most Δ(F)+1 edges of the copy. Exchanging two high-degree roles is routed
through a low-degree pivot, so every emitted step obeys the same bound.
"""

from __future__ import annotations

from collections.abc import Callable, Iterator
from dataclasses import dataclass, field

from loguru import logger

from zerosum_forests.embed import Embedding, ForestPattern, check_embedding, weight
from zerosum_forests.errors import InternalError, PreconditionError, SearchExhausted
from zerosum_forests.graphcore import Edge, EdgeLabeling, norm_edge, total_weight
from zerosum_forests.lib import derive_seed, log
from zerosum_forests.rng import Xoshiro256

RESTARTS = 64


@dataclass(frozen=True)
class WalkStep:
    before: Embedding
    after: Embedding
    removed: frozenset[Edge]
    added: frozenset[Edge]

    def delta(self, L: EdgeLabeling) -> int:
        s = L.signs
        return sum(s[a][b] for a, b in self.added) - sum(s[a][b] for a, b in self.removed)


@dataclass
class BoundedCopy:
    """Result of the bounded-copy search, with the walk that produced it."""

    embedding: Embedding
    weight: int
    plus_weight: int
    minus_weight: int
    trace: list[WalkStep] = field(default_factory=list)


def _swap_once(F: ForestPattern, e: Embedding, a: int, b: int) -> WalkStep:
    m, inv = e.map, e.inverse
    pa, pb = inv[a], inv[b]
    new = list(m)
    new[pa], new[pb] = b, a
    adj = F.adjacency
    old_local = {norm_edge(a, m[x]) for x in adj[pa]} | {norm_edge(b, m[y]) for y in adj[pb]}
    new_local = {norm_edge(b, new[x]) for x in adj[pa]} | {norm_edge(a, new[y]) for y in adj[pb]}
    return WalkStep(
        before=e,
        after=Embedding(tuple(new)),
        removed=frozenset(old_local - new_local),
        added=frozenset(new_local - old_local),
    )


def pivot_for(F: ForestPattern, e: Embedding, exclude: tuple[int, ...]) -> int:
    """Smallest host vertex holding a pattern vertex of degree at most one."""
    inv = e.inverse
    for h in range(F.n):
        if h not in exclude and F.degrees[inv[h]] <= 1:
            return h
    msg = "forest without a vertex of degree at most one"
    raise InternalError(msg)


def role_swap(F: ForestPattern, e: Embedding, a: int, b: int) -> list[WalkStep]:
    """Exchange the pattern roles held by hosts a and b.

    Returns one step when either role has degree at most one, otherwise
    three steps through the pivot w: (a, w), (a, b), (b, w).
    """
    if a == b:
        msg = "role_swap needs two distinct hosts"
        raise PreconditionError(msg)
    inv = e.inverse
    if F.degrees[inv[a]] <= 1 or F.degrees[inv[b]] <= 1:
        return [_swap_once(F, e, a, b)]
    w = pivot_for(F, e, (a, b))
    first = _swap_once(F, e, a, w)
    second = _swap_once(F, first.after, a, b)
    third = _swap_once(F, second.after, b, w)
    return [first, second, third]


def transpositions(start: Embedding, target: Embedding) -> list[tuple[int, int]]:
    """Host transpositions carrying start to target.

    Cycles of the host permutation target∘start⁻¹ are taken by smallest
    element, and each cycle (x0 .. x_{m−1}) is rotated from its tail:
    (x_{m−2} x_{m−1}) first, (x0 x1) last.
    """
    n = len(start.map)
    perm = [0] * n
    for p in range(n):
        perm[start.map[p]] = target.map[p]
    seen = [False] * n
    swaps = []
    for x in range(n):
        if seen[x]:
            continue
        cycle = [x]
        seen[x] = True
        y = perm[x]
        while y != x:
            cycle.append(y)
            seen[y] = True
            y = perm[y]
        swaps.extend((cycle[i], cycle[i + 1]) for i in range(len(cycle) - 2, -1, -1))
    return swaps


def walk(F: ForestPattern, start: Embedding, target: Embedding) -> Iterator[WalkStep]:
    """Yield the role-swap steps leading from start to target."""
    check_embedding(F, start)
    check_embedding(F, target)
    current = start
    for a, b in transpositions(start, target):
        for step in role_swap(F, current, a, b):
            yield step
            current = step.after
    if current != target:
        msg = f"walk ended at {list(current.map)}, expected {list(target.map)}"
        raise InternalError(msg)


def swap_delta(L: EdgeLabeling, F: ForestPattern, e: Embedding, a: int, b: int) -> int:
    """Weight change of a direct role exchange of hosts a and b."""
    s, m, inv, adj = L.signs, e.map, e.inverse, F.adjacency
    pa, pb = inv[a], inv[b]
    old = sum(s[a][m[x]] for x in adj[pa]) + sum(s[b][m[y]] for y in adj[pb])
    new = sum(s[b][a if x == pb else m[x]] for x in adj[pa])
    new += sum(s[a][b if y == pa else m[y]] for y in adj[pb])
    return new - old


def swapped(e: Embedding, a: int, b: int) -> Embedding:
    m = list(e.map)
    inv = e.inverse
    m[inv[a]], m[inv[b]] = b, a
    return Embedding(tuple(m))


def hill_climb(
    L: EdgeLabeling,
    F: ForestPattern,
    e: Embedding,
    done: Callable[[int], bool],
    key: Callable[[int], int],
    pairs: list[tuple[int, int]] | None = None,
    max_rounds: int = 10_000,
) -> tuple[Embedding, int]:
    """Steepest descent on key(weight) over role exchanges until done(weight).

    Args:
        L: Labeling
        F: Pattern
        e: Start copy
        done: Stop predicate on the current weight
        key: Score to minimize
        pairs: Host pairs allowed to exchange, all pairs by default
        max_rounds: Hard cap on accepted moves

    Returns:
        (copy, weight) where the climb stopped
    """
    n = F.n
    if pairs is None:
        pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    w = weight(L, F, e)
    for _ in range(max_rounds):
        if done(w):
            break
        best = None
        for a, b in pairs:
            d = swap_delta(L, F, e, a, b)
            if key(w + d) < key(w) and (best is None or key(w + d) < key(w + best[0])):
                best = (d, a, b)
        if best is None:
            break
        d, a, b = best
        e = swapped(e, a, b)
        w += d
    return e, w


def random_embedding(n: int, seed: int) -> Embedding:
    m = list(range(n))
    Xoshiro256(seed).shuffle(m)
    return Embedding(tuple(m))


def find_signed_copy(
    L: EdgeLabeling, F: ForestPattern, sign: int, seed: int = 0, restarts: int = RESTARTS
) -> tuple[Embedding, int]:
    """A copy with sign·weight ≥ 0, by restarts of greedy ascent.

    Raises:
        SearchExhausted: no restart reached the wanted sign
    """
    label = "plus" if sign > 0 else "minus"
    for r in range(restarts):
        start = random_embedding(F.n, derive_seed(seed, label, r))
        e, w = hill_climb(L, F, start, done=lambda w: sign * w >= 0, key=lambda w: -sign * w)
        if sign * w >= 0:
            return e, w
    msg = f"no copy with {label} weight after {restarts} restarts"
    raise SearchExhausted(msg)


def bounded_copy(
    L: EdgeLabeling, F: ForestPattern, seed: int = 0, restarts: int = RESTARTS
) -> BoundedCopy:
    """Copy of F with |weight| ≤ Δ(F)+1 in a zero-sum labeling.

    Finds copies F⁺ (weight ≥ 0) and F⁻ (weight ≤ 0), then walks from F⁺ to
    F⁻ by role exchanges. Consecutive weights differ by at most 2(Δ+1), so
    the walk meets a copy within the bound.
    """
    if L.n != F.n:
        msg = f"pattern has {F.n} vertices, labeling has {L.n}"
        raise PreconditionError(msg)
    if total_weight(L) != 0:
        msg = "bounded_copy needs a zero-sum labeling"
        raise PreconditionError(msg)
    if F.max_degree < 1:
        msg = "pattern has no edges"
        raise PreconditionError(msg)

    bound = F.max_degree + 1
    plus, w_plus = find_signed_copy(L, F, 1, seed, restarts)
    if abs(w_plus) <= bound:
        log("WALK", F.name, f"n={F.n} weight={w_plus} steps=0")
        return BoundedCopy(plus, w_plus, w_plus, w_plus)
    minus, w_minus = find_signed_copy(L, F, -1, seed, restarts)

    trace: list[WalkStep] = []
    w = w_plus
    for step in walk(F, plus, minus):
        trace.append(step)
        w += step.delta(L)
        if abs(w) <= bound:
            logger.debug("walk stopped after {} steps at weight {}", len(trace), w)
            log("WALK", F.name, f"n={F.n} weight={w} steps={len(trace)}")
            return BoundedCopy(step.after, w, w_plus, w_minus, trace)
    msg = f"walk from weight {w_plus} to {w_minus} never met |weight| <= {bound}"
    raise InternalError(msg)
