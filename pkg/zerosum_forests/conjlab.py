"""Desk-scale checks of the two open conjectures.

The (Δ−1)/2 conjecture: every spanning forest F has a copy with
|weight| ≤ (Δ(F)−1)/2 in a zero-sum labeling. The T-factor conjecture: a
zero-sum labeling of K_n has a zero-sum T-factor once n is large in terms
of |T|, whenever C(n,2) and (|T|−1)n/|T| are even.

Neither is proven. A report can only come out consistent, or carry a
witness labeling.
"""

from __future__ import annotations

from collections.abc import Callable, Iterator
from itertools import chain, combinations
from math import comb, factorial
from typing import Literal

import networkx as nx
import pandas as pd
from loguru import logger
from networkx.algorithms.isomorphism import GraphMatcher

from zerosum_forests.embed import ForestPattern, make_pattern, min_abs_weight_exhaustive, parse_pattern
from zerosum_forests.errors import DivisibilityError, ParityError, SpecError, TooLarge, Unresolved
from zerosum_forests.factorsolve import EXHAUSTIVE_LIMIT, TreeShape, factor_conditions, regroup, solve_path_factor
from zerosum_forests.graphcore import (
    EdgeLabeling,
    construct_star_extremal_0mod4,
    construct_star_extremal_1mod4,
    dumps,
    edge_count,
    from_positive_set,
    random_zero_sum,
)
from zerosum_forests.lib import derive_seed, log
from zerosum_forests.schemas import ConjectureReport
from zerosum_forests.swapwalk import bounded_copy
from zerosum_forests.sweep import run_map

RAW_LIMIT = 10**6
CANONICAL_MAX_N = 8
SAMPLES = 10_000
REGIME_NOTE = "below asymptotic regime: the conjecture only claims sufficiently large n"


def parity_adjusted_bound(F: ForestPattern) -> int:
    """Largest value ≤ (Δ−1)/2 with the parity of |E(F)|, never below that parity."""
    b = (F.max_degree - 1) // 2
    parity = len(F.edges) % 2
    if b % 2 != parity:
        b -= 1
    return max(b, parity)


# Labelings and isomorph rejection


def _colex_pairs(n: int) -> list[tuple[int, int]]:
    return [(a, b) for b in range(n) for a in range(b)]


def labeling_code(L: EdgeLabeling, order: list[int] | None = None) -> int:
    """Positive-edge bitstring of L read with vertices relabeled by order, colex pair order."""
    s = L.signs
    order = list(range(L.n)) if order is None else order
    code = 0
    for a, b in _colex_pairs(L.n):
        code = (code << 1) | (s[order[a]][order[b]] > 0)
    return code


def canonical_form(L: EdgeLabeling) -> int:
    """Smallest code over all vertex orders.

    Vertices are placed one at a time; each placement fixes the next block
    of colex bits, so a prefix already above the best one is cut.
    """
    n, s = L.n, L.signs
    best: list[int] | None = None
    best_order: list[int] = []

    def rec(order: list[int], bits: list[int]) -> None:
        nonlocal best, best_order
        if len(order) == n:
            if best is None or bits < best:
                best, best_order = bits, order
            return
        for v in range(n):
            if v in order:
                continue
            cand = bits + [int(s[u][v] > 0) for u in order]
            if best is not None and cand > best[: len(cand)]:
                continue
            rec([*order, v], cand)

    rec([], [])
    return labeling_code(L, best_order)


def labeling_from_code(n: int, code: int) -> EdgeLabeling:
    """The labeling whose identity code is code."""
    pairs = _colex_pairs(n)
    top = len(pairs) - 1
    return from_positive_set(n, [p for i, p in enumerate(pairs) if code >> (top - i) & 1])


def positive_graph(L: EdgeLabeling) -> nx.Graph:
    G = nx.Graph()
    G.add_nodes_from(range(L.n))
    G.add_edges_from(L.positive_edges())
    return G


def orbit_size(L: EdgeLabeling) -> int:
    """Number of distinct labelings isomorphic to L, n!/|Aut(L)|."""
    if L.n > CANONICAL_MAX_N:
        msg = f"orbit counting needs n <= {CANONICAL_MAX_N}, got {L.n}"
        raise TooLarge(msg)
    G = positive_graph(L)
    automorphisms = sum(1 for _ in GraphMatcher(G, G).isomorphisms_iter())
    return factorial(L.n) // automorphisms


def _check_parity(n: int) -> int:
    m = edge_count(n)
    if m % 2:
        msg = f"K_{n} has {m} edges, an odd number"
        raise ParityError(msg)
    return m


def _degree_key(adj: tuple[int, ...]) -> tuple:
    """Sorted (degree, neighbour degrees) pairs; isomorphic graphs share it."""
    deg = [a.bit_count() for a in adj]
    k = len(adj)
    return tuple(sorted((deg[v], tuple(sorted(deg[u] for u in range(k) if adj[v] >> u & 1))) for v in range(k)))


def _mask_graph(adj: tuple[int, ...]) -> nx.Graph:
    G = nx.Graph()
    G.add_nodes_from(range(len(adj)))
    G.add_edges_from((u, v) for v in range(len(adj)) for u in range(v) if adj[v] >> u & 1)
    return G


def _class_representatives(n: int) -> list[tuple[int, ...]]:
    """Adjacency masks of one positive graph per class with C(n,2)/2 edges.

    Grown one vertex at a time: every graph on k+1 vertices is some class
    representative on k vertices plus a vertex, so extending each
    representative by every neighbourhood and rejecting isomorphs reaches
    every class. A level keeps only graphs that can still end at the
    target edge count.
    """
    target = edge_count(n) // 2
    level: list[tuple[int, ...]] = [(0,)]
    for k in range(1, n):
        later = sum(range(k + 1, n))
        buckets: dict[tuple, list[nx.Graph]] = {}
        grown_level = []
        for adj in level:
            e = sum(a.bit_count() for a in adj) // 2
            for size in range(max(0, target - e - later), min(k, target - e) + 1):
                for nbrs in combinations(range(k), size):
                    mask = sum(1 << u for u in nbrs)
                    grown = (*(a | (1 << k) if mask >> u & 1 else a for u, a in enumerate(adj)), mask)
                    bucket = buckets.setdefault(_degree_key(grown), [])
                    G = _mask_graph(grown)
                    if any(nx.is_isomorphic(G, H) for H in bucket):
                        continue
                    bucket.append(G)
                    grown_level.append(grown)
        logger.debug("{} classes on {} vertices", len(grown_level), k + 1)
        level = grown_level
    return level


def canonical_labelings(n: int) -> Iterator[EdgeLabeling]:
    """One zero-sum labeling per isomorphism class, in canonical form order.

    Each yielded labeling's identity code equals its canonical form.
    """
    _check_parity(n)
    if n > CANONICAL_MAX_N:
        msg = f"canonical enumeration needs n <= {CANONICAL_MAX_N}, got {n}"
        raise TooLarge(msg)
    codes = []
    for adj in _class_representatives(n):
        edges = [(u, v) for v in range(n) for u in range(v) if adj[v] >> u & 1]
        codes.append(canonical_form(from_positive_set(n, edges)))
    for code in sorted(codes):
        yield labeling_from_code(n, code)


def _iter_zero_sum(n: int, limit: int) -> Iterator[EdgeLabeling]:
    m = _check_parity(n)
    total = comb(m, m // 2)
    if total > limit:
        msg = f"{total} zero-sum labelings of K_{n} exceed the limit {limit}"
        raise TooLarge(msg)
    for positive in combinations(range(m), m // 2):
        bits = 0
        for k in positive:
            bits |= 1 << k
        yield EdgeLabeling(n, bits)


def exhaustive_labelings(
    n: int,
    visitor: Callable[[EdgeLabeling], object] | None = None,
    canonical: bool = False,
    limit: int = RAW_LIMIT,
) -> int:
    """Visit every zero-sum labeling of K_n, or one per isomorphism class.

    limit caps raw enumeration only. A class is visited through the member
    whose identity code equals the canonical form.
    """
    count = 0
    for L in canonical_labelings(n) if canonical else _iter_zero_sum(n, limit):
        count += 1
        if visitor is not None:
            visitor(L)
    return count


# (Δ−1)/2 conjecture


def _extremal(n: int) -> EdgeLabeling | None:
    if n >= 4 and n % 4 == 0:
        return construct_star_extremal_0mod4(n)
    if n >= 5 and n % 4 == 1:
        return construct_star_extremal_1mod4(n)
    return None


def _min_weight_sample(args: tuple[int, str, int]) -> tuple[int, int]:
    n, pattern, seed = args
    L = random_zero_sum(n, seed)
    best, _ = min_abs_weight_exhaustive(L, parse_pattern(pattern, n))
    return best, seed


def _worst(frame: pd.DataFrame, column: str = "min_weight") -> int | None:
    """Index of the first row holding the largest value."""
    if frame.empty:
        return None
    return int(frame[column].idxmax())


def check_conjecture2(
    n: int,
    pattern: str,
    mode: Literal["exhaustive", "canonical", "sampled"] = "exhaustive",
    samples: int = SAMPLES,
    seed: int = 0,
    jobs: int = 1,
    include_extremal: bool = False,
) -> ConjectureReport:
    """Worst minimum copy weight of a pattern over zero-sum labelings of K_n.

    Args:
        n: Vertex count, n = 0 or 1 mod 4
        pattern: Pattern spec, e.g. "star", "path", "factor:P3"
        mode: "exhaustive", "canonical" (one labeling per class) or "sampled"
        samples: Labelings drawn in sampled mode
        seed: Master seed of sampled mode
        jobs: Worker processes for sampled mode
        include_extremal: Also test the star-extremal construction for n

    Returns:
        Report whose verdict is COUNTEREXAMPLE iff some labeling beats (Δ−1)/2.
        When |E(F)| is odd and Δ ≤ 2 the bound is raised to 1, the least odd weight.
    """
    F = parse_pattern(pattern, n)
    if edge_count(n) % 2:
        msg = f"K_{n} has {edge_count(n)} edges, an odd number"
        raise ParityError(msg)
    rows: list[dict] = []
    witnesses: dict[int, EdgeLabeling] = {}
    seeds: dict[int, int] = {}

    def visit(L: EdgeLabeling, label: str) -> None:
        best, _ = min_abs_weight_exhaustive(L, F)
        rows.append({"label": label, "min_weight": best})
        witnesses[len(rows) - 1] = L

    if include_extremal and (X := _extremal(n)) is not None:
        visit(X, "extremal")

    if mode in ("exhaustive", "canonical"):
        exhaustive_labelings(n, lambda L: visit(L, "enumerated"), canonical=mode == "canonical")
        report_seed, report_samples = None, None
    elif mode == "sampled":
        items = [(n, pattern, derive_seed(seed, "sample", i)) for i in range(samples)]
        offset = len(rows)
        for i, (best, sub_seed) in enumerate(run_map(_min_weight_sample, items, jobs)):
            rows.append({"label": f"sample:{i}", "min_weight": best})
            seeds[offset + i] = sub_seed
        report_seed, report_samples = seed, samples
    else:
        msg = f"unknown mode {mode!r}"
        raise SpecError(msg)

    frame = pd.DataFrame(rows)
    idx = _worst(frame)
    witness = None
    worst_min = 0
    if idx is not None:
        worst_min = int(frame.loc[idx, "min_weight"])
        witness = dumps(witnesses[idx] if idx in witnesses else random_zero_sum(n, seeds[idx]))

    bound = max((F.max_degree - 1) / 2, parity_adjusted_bound(F))
    report = ConjectureReport(
        conjecture=2,
        n=n,
        pattern=pattern,
        mode=mode,
        seed=report_seed,
        samples=report_samples,
        tested=len(frame),
        worst_min=worst_min,
        bound=bound,
        witness=witness,
        verdict="COUNTEREXAMPLE" if worst_min > bound else "consistent",
    )
    log("CHECK", f"conjecture2 {pattern}", f"n={n} tested={report.tested} worst={worst_min}", success=report.verdict == "consistent")
    return report


# T-factor conjecture


def _tree_spec(tree: str) -> str:
    tree = tree.strip()
    return tree if tree.startswith("factor:") else f"factor:{tree}"


def _path_order(F: ForestPattern) -> int | None:
    """k when F is a P_k-factor with k in 2..4."""
    k = len(F.components[0])
    if 2 <= k <= 4 and F.max_degree <= min(2, k - 1) and F.name == f"factor:P{k}":
        return k
    return None


def tree_factor_search(
    L: EdgeLabeling, F: ForestPattern, seed: int = 0, max_parts: int = 3, exhaustive_limit: int = EXHAUSTIVE_LIMIT
) -> tuple[int, bool]:
    """Smallest |weight| reached for a T-factor, and whether it is the exact minimum.

    Starts from a bounded copy and regroups up to max_parts components at a
    time toward weight 0. Stuck searches on n ≤ exhaustive_limit end in the
    exhaustive oracle.
    """
    k = len(F.components[0])
    shape = TreeShape.of_tree(make_pattern(k, [(a, b) for a, b in F.edges if b < k], "T"))
    copy = bounded_copy(L, F, seed=seed)
    if copy.weight == 0:
        return 0, True
    m = copy.embedding.map
    parts = [tuple(m[b + i] for i in shape.order) for b in range(0, F.n, k)]
    signs = L.signs

    def part_weight(part: tuple[int, ...]) -> int:
        return sum(signs[part[a]][part[b]] for a, b in shape.edges)

    weights = [part_weight(p) for p in parts]
    total = sum(weights)
    for size in range(1, min(max_parts, len(parts)) + 1):
        for combo in combinations(range(len(parts)), size):
            vertices = list(chain.from_iterable(parts[i] for i in combo))
            found = regroup(signs, vertices, shape, sum(weights[i] for i in combo) - total)
            if found is not None:
                logger.debug("regrouping {} components reached weight 0", size)
                return 0, True
    if F.n <= exhaustive_limit:
        best, _ = min_abs_weight_exhaustive(L, F)
        return best, True
    return abs(total), False


def _factor_sample(args: tuple[int, str, int]) -> tuple[int, bool, str, int]:
    """(min weight reached, exact, stage, seed) for one sampled labeling."""
    n, spec, seed = args
    L = random_zero_sum(n, seed)
    F = parse_pattern(spec, n)
    k = _path_order(F)
    if k is None:
        best, exact = tree_factor_search(L, F, seed=seed)
        return best, exact, "regroup" if best == 0 else "stuck", seed
    try:
        solution = solve_path_factor(L, k, seed=seed)
    except Unresolved as err:
        if n <= EXHAUSTIVE_LIMIT:
            best, _ = min_abs_weight_exhaustive(L, F)
            return best, True, "exhaustive", seed
        return abs(err.report.best_weight), False, "unresolved", seed
    return 0, True, solution.stage, seed


def stage_counts(frame: pd.DataFrame) -> dict[str, int]:
    return {str(k): int(v) for k, v in frame["stage"].value_counts().sort_index().items()}


def check_conjecture1(n: int, tree: str, samples: int = SAMPLES, seed: int = 0, jobs: int = 1) -> ConjectureReport:
    """Look for zero-sum T-factors in sampled zero-sum labelings of K_n.

    tree is a component spec such as "P3", "P4" or "S4". Samples the solver
    cannot settle are counted as unresolved. A sample whose exact minimum is
    nonzero becomes the witness.
    """
    spec = _tree_spec(tree)
    F = parse_pattern(spec, n)
    k = len(F.components[0])
    if any(len(c) != k for c in F.components):
        msg = f"{spec} is not a factor of equal trees"
        raise SpecError(msg)
    if k in (2, 3, 4) and _path_order(F):
        factor_conditions(n, k)
    elif edge_count(n) % 2 or (k - 1) * (n // k) % 2:
        msg = f"n={n} fails the parity conditions for a {spec}"
        raise DivisibilityError(msg)
    items = [(n, spec, derive_seed(seed, "sample", i)) for i in range(samples)]
    results = run_map(_factor_sample, items, jobs)
    seeds = [r[3] for r in results]
    frame = pd.DataFrame([r[:3] for r in results], columns=["min_weight", "exact", "stage"])

    exact_failures = frame[(frame["min_weight"] > 0) & frame["exact"]]
    open_failures = frame[(frame["min_weight"] > 0) & ~frame["exact"]]
    worst = _worst(exact_failures)
    if worst is None:
        worst = _worst(open_failures)
    worst_min = int(exact_failures["min_weight"].max()) if not exact_failures.empty else 0

    note = None
    if worst_min > 0 or not open_failures.empty:
        note = REGIME_NOTE
    stages = ",".join(f"{k}:{v}" for k, v in stage_counts(frame).items()) if not frame.empty else ""

    report = ConjectureReport(
        conjecture=1,
        n=n,
        pattern=spec,
        mode="sampled",
        seed=seed,
        samples=samples,
        tested=len(frame),
        worst_min=worst_min,
        bound=0.0,
        unresolved=len(open_failures),
        witness=dumps(random_zero_sum(n, seeds[worst])) if worst is not None else None,
        note=f"{note}; stages={stages}" if note else f"stages={stages}",
        verdict="COUNTEREXAMPLE" if worst_min > 0 else "consistent",
    )
    log("CHECK", f"conjecture1 {spec}", f"n={n} tested={report.tested} unresolved={report.unresolved}")
    return report

