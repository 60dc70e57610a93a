"""Zero-sum P_k-factors for k in {2, 3, 4}.

The pipeline starts from a bounded copy of the factor (|weight| ≤ 2 for
paths), removes (1,−1,1) paths when k = 4, then tries the exchange catalog,
bounded re-partitions of two and three paths and, for small n, exhaustive
search. A factor of weight −2 is handled as weight 2 under the negated
labeling; every exchange is structural, so it maps back unchanged.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from functools import cache, cached_property, lru_cache
from itertools import chain, combinations, permutations, product
from math import comb

import networkx as nx
from loguru import logger

from zerosum_forests.embed import (
    Embedding,
    ForestPattern,
    make_pattern,
    min_abs_weight_exhaustive,
    path_factor,
    tree_placements,
)
from zerosum_forests.errors import (
    DivisibilityError,
    FormatError,
    InternalError,
    NotAFactor,
    PreconditionError,
    SpecError,
    Unresolved,
)
from zerosum_forests.graphcore import Edge, EdgeLabeling, edge_count, negate, norm_edge
from zerosum_forests.lib import log
from zerosum_forests.quadmin import aggregate_bound
from zerosum_forests.schemas import UnresolvedReport
from zerosum_forests.swapwalk import RESTARTS, bounded_copy
from zerosum_forests.templates import Template, catalog

EXHAUSTIVE_LIMIT = 12
LARGE_N = 84

STAGES = ("walk", "normalize", "template", "repartition2", "repartition3", "exhaustive")


@dataclass(frozen=True, order=True)
class PathType:
    """Labels along a path, stored in the lexicographically larger orientation."""

    signs: tuple[int, ...]

    @classmethod
    def of(cls, signs: Sequence[int]) -> PathType:
        signs = tuple(signs)
        return cls(max(signs, signs[::-1]))

    @property
    def weight(self) -> int:
        return sum(self.signs)

    def __str__(self) -> str:
        return "(" + ",".join(str(s) for s in self.signs) + ")"


@dataclass(frozen=True)
class PathFactor:
    k: int
    paths: tuple[tuple[int, ...], ...]

    @classmethod
    def from_paths(cls, k: int, paths: Iterable[Sequence[int]]) -> PathFactor:
        """Normalize: each path starts at its smaller end, paths ordered by smallest vertex."""
        oriented = []
        for p in paths:
            p = tuple(p)
            oriented.append(p if p[0] < p[-1] else p[::-1])
        oriented.sort(key=min)
        return cls(k, tuple(oriented))

    @classmethod
    def from_embedding(cls, F: ForestPattern, e: Embedding, k: int) -> PathFactor:
        """Read a copy of path_factor(n, k) back as paths."""
        m = e.map
        return cls.from_paths(k, (tuple(m[b + i] for i in range(k)) for b in range(0, F.n, k)))

    @property
    def n(self) -> int:
        return self.k * len(self.paths)

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(chain.from_iterable(path_edges(p) for p in self.paths))

    def validate(self, n: int) -> None:
        seen = sorted(chain.from_iterable(self.paths))
        if seen != list(range(n)):
            msg = f"paths do not partition 0..{n - 1}"
            raise NotAFactor(msg)
        for p in self.paths:
            if len(p) != self.k:
                msg = f"path {list(p)} does not have {self.k} vertices"
                raise NotAFactor(msg)


@dataclass(frozen=True)
class EdgeExchange:
    removed: frozenset[Edge]
    added: frozenset[Edge]
    delta: int
    source: str = ""

    @classmethod
    def between(cls, L: EdgeLabeling, old: Iterable[Edge], new: Iterable[Edge], source: str = "") -> EdgeExchange:
        old, new = set(old), set(new)
        removed, added = frozenset(old - new), frozenset(new - old)
        s = L.signs
        delta = sum(s[a][b] for a, b in added) - sum(s[a][b] for a, b in removed)
        return cls(removed, added, delta, source)


@dataclass
class FactorSolution:
    factor: PathFactor
    stage: str
    moves: list[str] = field(default_factory=list)


def path_edges(path: Sequence[int]) -> list[Edge]:
    return [norm_edge(path[i], path[i + 1]) for i in range(len(path) - 1)]


def path_signs(L: EdgeLabeling, path: Sequence[int]) -> tuple[int, ...]:
    s = L.signs
    return tuple(s[path[i]][path[i + 1]] for i in range(len(path) - 1))


def path_type(L: EdgeLabeling, path: Sequence[int]) -> PathType:
    return PathType.of(path_signs(L, path))


def factor_weight(L: EdgeLabeling, factor: PathFactor) -> int:
    return sum(sum(path_signs(L, p)) for p in factor.paths)


def classify(L: EdgeLabeling, factor: PathFactor) -> Counter[PathType]:
    return Counter(path_type(L, p) for p in factor.paths)


def census(L: EdgeLabeling, factor: PathFactor) -> dict[str, int]:
    counts = classify(L, factor)
    return {str(t): counts[t] for t in sorted(counts, reverse=True)}


def factor_conditions(n: int, k: int) -> None:
    """n must admit a zero-sum P_k-factor at all.

    Raises:
        SpecError: k outside {2, 3, 4}
        DivisibilityError: k ∤ n, C(n,2) odd, or (k−1)n/k odd
    """
    if k not in (2, 3, 4):
        msg = f"path factors are solved for k in 2..4, got k={k}"
        raise SpecError(msg)
    if n % k:
        msg = f"P{k}-factor needs {k} | n, got n={n}"
        raise DivisibilityError(msg)
    if edge_count(n) % 2:
        msg = f"K_{n} has {edge_count(n)} edges, an odd number"
        raise DivisibilityError(msg)
    if (k - 1) * (n // k) % 2:
        msg = f"a P{k}-factor of K_{n} has an odd number of edges"
        raise DivisibilityError(msg)


def _decompose(vertices: Iterable[int], k: int, edges: Iterable[Edge]) -> PathFactor:
    G = nx.Graph()
    G.add_nodes_from(vertices)
    for a, b in edges:
        if a not in G or b not in G:
            msg = f"edge {a}-{b} leaves the vertex set"
            raise NotAFactor(msg)
        G.add_edge(a, b)
    if any(d > 2 for _, d in G.degree):
        msg = "a vertex has degree above 2"
        raise NotAFactor(msg)
    if not nx.is_forest(G):
        msg = "edge set contains a cycle"
        raise NotAFactor(msg)
    paths = []
    for comp in nx.connected_components(G):
        path = list(nx.dfs_preorder_nodes(G, min(v for v in comp if G.degree[v] <= 1)))
        if len(path) != k:
            msg = f"component {path} is not a path on {k} vertices"
            raise NotAFactor(msg)
        paths.append(path)
    return PathFactor.from_paths(k, paths)


def apply_exchange(L: EdgeLabeling, factor: PathFactor, ex: EdgeExchange) -> PathFactor:
    """Remove ex.removed, add ex.added, and re-read the edges as a P_k-factor.

    Raises:
        NotAFactor: removed edges missing from the factor, or the result is not a P_k-factor
    """
    edges = factor.edge_set
    if not ex.removed <= edges:
        msg = "exchange removes edges that are not in the factor"
        raise NotAFactor(msg)
    result = _decompose(chain.from_iterable(factor.paths), factor.k, (edges - ex.removed) | ex.added)
    if factor_weight(L, result) != factor_weight(L, factor) + ex.delta:
        msg = f"exchange {ex.source or '-'} does not change the weight by {ex.delta}"
        raise InternalError(msg)
    return result


def p4_normalize(L: EdgeLabeling, factor: PathFactor) -> PathFactor:
    """Remove every (s,−s,s) path, where s is the sign of the factor weight.

    A path u1u2u3u4 of that type with c(u1u4) = −s yields a zero-sum factor
    through −{u1u2}+{u1u4}, returned at once. Otherwise it becomes u4u1u2u3,
    which keeps the weight.
    """
    w = factor_weight(L, factor)
    if factor.k != 4 or w == 0:
        return factor
    sign = 1 if w > 0 else -1
    bad = (sign, -sign, sign)
    s = L.signs
    paths = list(factor.paths)
    for i, p in enumerate(paths):
        if path_signs(L, p) != bad:
            continue
        u1, u2, u3, u4 = p
        if s[u1][u4] == sign:
            paths[i] = (u4, u1, u2, u3)
        elif w == 2 * sign:
            ex = EdgeExchange.between(L, path_edges(p), [norm_edge(u2, u3), norm_edge(u3, u4), norm_edge(u1, u4)])
            return apply_exchange(L, factor, ex)
    return PathFactor.from_paths(4, paths)


# Template matching


@cache
def _template_index(k: int) -> dict[tuple[bool, tuple[PathType, ...]], list[Template]]:
    index: dict[tuple[bool, tuple[PathType, ...]], list[Template]] = {}
    for t in catalog(k):
        key = (t.endgame, tuple(PathType.of(x) for x in t.types))
        index.setdefault(key, []).append(t)
    return index


def _orderings(signs: list[list[int]], path: Sequence[int], oriented: tuple[int, ...]) -> list[tuple[int, ...]]:
    """Vertex orders of the path's vertex set whose labels read exactly `oriented`."""
    out = []
    for p in permutations(path):
        if all(signs[p[i]][p[i + 1]] == oriented[i] for i in range(len(oriented))):
            out.append(p)
    return out


def _holds(signs: list[list[int]], orders: Sequence[tuple[int, ...]], t: Template) -> bool:
    for ((sa, ia), (sb, ib)), sign in t.added:
        if signs[orders[sa][ia]][orders[sb][ib]] != sign:
            return False
    return True


def instantiate(
    L: EdgeLabeling, real: Sequence[Sequence[int]], orders: Sequence[tuple[int, ...]], t: Template
) -> EdgeExchange:
    """The exchange a template makes on real paths read in the given vertex orders."""
    old = chain.from_iterable(path_edges(p) for p in real)
    virtual = set(chain.from_iterable(path_edges(o) for o in orders))

    def host(sv: tuple[int, int]) -> int:
        return orders[sv[0]][sv[1]]

    virtual -= {norm_edge(host(a), host(b)) for a, b in t.removed}
    virtual |= {norm_edge(host(a), host(b)) for (a, b), _ in t.added}
    return EdgeExchange.between(L, old, virtual, t.name)


def template_search(
    L: EdgeLabeling,
    factor: PathFactor,
    allow_endgame: bool = True,
    avoid: set[frozenset[Edge]] | None = None,
) -> EdgeExchange | None:
    """First catalog exchange that zeroes the weight, else the first sign flip.

    Slots are filled by ordered tuples of distinct paths in lexicographic
    order, one path before two before three; templates follow catalog order.
    Sign flips leading to a factor in `avoid` are skipped.
    """
    w = factor_weight(L, factor)
    if abs(w) != 2:
        return None
    index = _template_index(factor.k)
    if not index:
        return None
    signs = (L if w > 0 else negate(L)).signs
    types = [PathType.of(tuple(signs[p[i]][p[i + 1]] for i in range(len(p) - 1))) for p in factor.paths]
    m = len(factor.paths)
    cached: dict[tuple[int, tuple[int, ...]], list[tuple[int, ...]]] = {}

    def orders_of(i: int, oriented: tuple[int, ...]) -> list[tuple[int, ...]]:
        key = (i, oriented)
        if key not in cached:
            cached[key] = _orderings(signs, factor.paths[i], oriented)
        return cached[key]

    for endgame in (False, True) if allow_endgame else (False,):
        for size in (1, 2, 3):
            for combo in permutations(range(m), size):
                templates = index.get((endgame, tuple(types[i] for i in combo)))
                if not templates:
                    continue
                real = [factor.paths[i] for i in combo]
                for t in templates:
                    for orders in product(*(orders_of(i, t.types[s]) for s, i in enumerate(combo))):
                        if not _holds(signs, orders, t):
                            continue
                        ex = instantiate(L, real, orders, t)
                        if endgame and avoid is not None:
                            after = (factor.edge_set - ex.removed) | ex.added
                            if after in avoid:
                                continue
                        logger.debug("template {} fired on paths {}", t.name, combo)
                        return ex
    return None


# Re-partition


@dataclass(frozen=True)
class TreeShape:
    """A tree on k vertices with its distinct placements onto k sorted hosts."""

    k: int
    order: tuple[int, ...]
    edges: tuple[Edge, ...]
    placements: tuple[tuple[int, ...], ...]

    @classmethod
    def of_tree(cls, T: ForestPattern) -> TreeShape:
        if len(T.components) != 1:
            msg = f"{T.name} is not a tree"
            raise SpecError(msg)
        order, local, placements = tree_placements(tuple(range(T.n)), T.adjacency)
        return cls(T.n, order, tuple(local), tuple(placements))

    @classmethod
    def path(cls, k: int) -> TreeShape:
        return _path_shape(k)

    def part(self, block: Sequence[int], placement: Sequence[int]) -> tuple[int, ...]:
        return tuple(block[i] for i in placement)


@cache
def _path_shape(k: int) -> TreeShape:
    return TreeShape.of_tree(make_pattern(k, [(i, i + 1) for i in range(k - 1)], f"P{k}"))


def regroupings(vertices: Sequence[int], shape: TreeShape) -> Iterator[list[tuple[int, ...]]]:
    """Every partition of the vertices into copies of the shape."""
    vertices = tuple(sorted(vertices))
    if len(vertices) % shape.k:
        msg = f"{len(vertices)} vertices do not split into blocks of {shape.k}"
        raise DivisibilityError(msg)

    def rec(remaining: tuple[int, ...]) -> Iterator[list[tuple[int, ...]]]:
        if not remaining:
            yield []
            return
        first, rest = remaining[0], remaining[1:]
        for others in combinations(rest, shape.k - 1):
            block = (first, *others)
            left = tuple(v for v in rest if v not in others)
            for p in shape.placements:
                part = shape.part(block, p)
                for tail in rec(left):
                    yield [part, *tail]

    yield from rec(vertices)


def regroup(
    signs: list[list[int]], vertices: Sequence[int], shape: TreeShape, want: int
) -> list[tuple[int, ...]] | None:
    """A partition of the vertices into copies of the shape with total weight `want`."""
    k = shape.k
    per_block = len(shape.edges)
    vertices = tuple(sorted(vertices))

    @cache
    def options(block: tuple[int, ...]) -> dict[int, tuple[int, ...]]:
        found: dict[int, tuple[int, ...]] = {}
        for p in shape.placements:
            part = shape.part(block, p)
            w = sum(signs[part[a]][part[b]] for a, b in shape.edges)
            found.setdefault(w, part)
        return found

    @lru_cache(maxsize=None)
    def rec(remaining: tuple[int, ...], need: int) -> tuple[tuple[int, ...], ...] | None:
        if not remaining:
            return () if need == 0 else None
        if abs(need) > per_block * (len(remaining) // k):
            return None
        first, rest = remaining[0], remaining[1:]
        for others in combinations(rest, k - 1):
            block = (first, *others)
            left = tuple(v for v in rest if v not in others)
            for w, part in options(block).items():
                tail = rec(left, need - w)
                if tail is not None:
                    return (part, *tail)
        return None

    found = rec(vertices, want)
    return None if found is None else list(found)


def repartition_search(
    L: EdgeLabeling, factor: PathFactor, max_paths: int = 3, target: int = 0, min_paths: int = 1
) -> EdgeExchange | None:
    """Exchange regrouping at most max_paths paths so the factor weight becomes target."""
    w = factor_weight(L, factor)
    if w == target:
        return None
    shape = TreeShape.path(factor.k)
    weights = [sum(path_signs(L, p)) for p in factor.paths]
    m = len(factor.paths)
    for size in range(min_paths, min(max_paths, m) + 1):
        for combo in combinations(range(m), size):
            vertices = list(chain.from_iterable(factor.paths[i] for i in combo))
            want = sum(weights[i] for i in combo) + target - w
            parts = regroup(L.signs, vertices, shape, want)
            if parts is None:
                continue
            old = chain.from_iterable(path_edges(factor.paths[i]) for i in combo)
            new = chain.from_iterable(path_edges(p) for p in parts)
            logger.debug("repartition of paths {} reaches weight {}", combo, target)
            return EdgeExchange.between(L, old, new, f"repartition{size}")
    return None


# Diagnostics

_P4_CROSS: dict[tuple[tuple[int, ...], ...], int] = {
    ((1, 1, 1), (1, 1, -1)): 16,
    ((1, 1, 1), (-1, 1, -1)): 16,
    ((1, 1, -1), (-1, 1, -1)): 16,
    ((1, 1, -1), (1, 1, -1)): 16,
    ((1, 1, 1), (1, 1, 1)): 16,
    ((-1, 1, -1), (-1, 1, -1)): 16,
    ((1, 1, 1), (-1, -1, -1)): 12,
    ((1, 1, 1), (1, -1, -1)): 12,
    ((1, 1, -1), (1, -1, -1)): 8,
    ((1, -1, -1), (-1, 1, -1)): 8,
    ((1, 1, -1), (-1, -1, -1)): 8,
    ((-1, 1, -1), (-1, -1, -1)): 8,
    ((1, -1, -1), (-1, -1, -1)): 4,
    ((1, -1, -1), (1, -1, -1)): 5,
}
_P3_CROSS: dict[tuple[tuple[int, ...], ...], int] = {
    ((1, 1), (1, -1)): 9,
    ((1, 1), (-1, -1)): 6,
    ((1, -1), (1, -1)): 5,
}


def _positive_between(signs: list[list[int]], p: Sequence[int], q: Sequence[int]) -> int:
    return sum(1 for a in p for b in q if signs[a][b] > 0)


def claim_diagnostics(L: EdgeLabeling, factor: PathFactor) -> list[str]:
    """Conclusions a stuck weight ±2 factor should satisfy but does not.

    Read in the orientation where the weight is positive. Each line names
    the failed property and the paths involved.
    """
    w = factor_weight(L, factor)
    signs = (L if w >= 0 else negate(L)).signs
    k = factor.k
    paths = factor.paths
    types = [PathType.of(tuple(signs[p[i]][p[i + 1]] for i in range(k - 1))) for p in paths]
    failures = []

    for i, (p, t) in enumerate(zip(paths, types, strict=True)):
        if k == 3 and t.signs != (-1, -1) and signs[p[0]][p[2]] < 0:
            failures.append(f"chord: path {i} {t} has a negative end chord")
        if k == 4:
            if t.signs == (1, -1, 1):
                failures.append(f"no-alternating: path {i} has type {t}")
            if t.signs != (-1, -1, -1) and signs[p[0]][p[3]] < 0:
                failures.append(f"closing-chord: path {i} {t} has c(u1u4) = -1")
            if t.signs in ((1, 1, 1), (1, 1, -1), (-1, 1, -1)) and min(signs[p[0]][p[2]], signs[p[1]][p[3]]) < 0:
                failures.append(f"middle-chords: path {i} {t} has a negative chord")

    table = _P3_CROSS if k == 3 else _P4_CROSS if k == 4 else {}
    for i, j in combinations(range(len(paths)), 2):
        pair = tuple(sorted((types[i].signs, types[j].signs), reverse=True))
        need = table.get(pair)
        if need is None:
            continue
        got = _positive_between(signs, paths[i], paths[j])
        if got < need:
            failures.append(f"cross-positive: paths {i},{j} {types[i]}{types[j]} have {got} of {k * k}, need {need}")
    return failures


def p3_counting_bound(a: int, b: int, c: int) -> int:
    """Lower bound on c(E(K_n)) for a stuck weight-2 P3-factor.

    a, b, c count paths of types (1,1), (1,−1), (−1,−1); the bound is
    positive whenever a = c + 1, which contradicts a zero-sum labeling.
    """
    return 9 * comb(a, 2) + 9 * a * b + 3 * a + comb(b, 2) + b + 3 * a * c - 9 * comb(c, 2) - 9 * b * c - 3 * c


def _report(L: EdgeLabeling, factor: PathFactor) -> UnresolvedReport:
    n, k = L.n, factor.k
    notes = []
    if k == 4:
        if n < LARGE_N:
            notes.append(f"n={n} is below {LARGE_N}, where three mixed-type paths are forced")
        notes.append("a weight -2 factor sharing a mixed-type path is ruled out only for large n")
        notes.append(f"aggregate lower bound 5/256 n^2 - 7/2 n = {aggregate_bound(n):.4f}")
    if k == 3:
        counts = classify(L if factor_weight(L, factor) >= 0 else negate(L), factor)
        a, b, c = (counts[PathType(t)] for t in ((1, 1), (1, -1), (-1, -1)))
        notes.append(f"counting bound with a={a} b={b} c={c}: {p3_counting_bound(a, b, c)}")
    return UnresolvedReport(
        n=n,
        k=k,
        best_weight=factor_weight(L, factor),
        best_factor=[list(p) for p in factor.paths],
        type_census=census(L, factor),
        claim_failures=claim_diagnostics(L, factor),
        diagnostics=notes,
    )


def _done(L: EdgeLabeling, factor: PathFactor, stage: str, moves: list[str]) -> FactorSolution:
    factor.validate(L.n)
    if factor_weight(L, factor) != 0:
        msg = f"stage {stage} returned a factor of weight {factor_weight(L, factor)}"
        raise InternalError(msg)
    log("SOLVE", f"factor:P{factor.k}", f"n={L.n} stage={stage} moves={len(moves)}")
    return FactorSolution(factor, stage, moves)


def solve_path_factor(
    L: EdgeLabeling,
    k: int,
    seed: int = 0,
    max_rounds: int | None = None,
    exhaustive_limit: int = EXHAUSTIVE_LIMIT,
    restarts: int = RESTARTS,
) -> FactorSolution:
    """Zero-sum P_k-factor of a zero-sum labeling.

    Args:
        L: Zero-sum labeling
        k: Path order, 2, 3 or 4
        seed: Seed for the bounded-copy restarts
        max_rounds: Cap on catalog moves, 4n by default
        exhaustive_limit: Largest n handed to exhaustive search
        restarts: Restarts per signed copy search

    Returns:
        The factor and the stage that reached weight 0

    Raises:
        DivisibilityError: n admits no P_k-factor of even size
        PreconditionError: L is not zero-sum
        Unresolved: every stage failed; the report holds the best factor
    """
    n = L.n
    factor_conditions(n, k)
    if not L.zero_sum:
        msg = "factor solver needs a zero-sum labeling"
        raise PreconditionError(msg)

    pattern = path_factor(n, k)
    copy = bounded_copy(L, pattern, seed=seed, restarts=restarts)
    factor = PathFactor.from_embedding(pattern, copy.embedding, k)
    moves: list[str] = []
    if factor_weight(L, factor) == 0:
        return _done(L, factor, "walk", moves)

    if k == 4:
        factor = p4_normalize(L, factor)
        if factor_weight(L, factor) == 0:
            return _done(L, factor, "normalize", ["normalize"])

    visited = {factor.edge_set}
    for _ in range(4 * n if max_rounds is None else max_rounds):
        ex = template_search(L, factor, avoid=visited)
        if ex is None:
            break
        factor = apply_exchange(L, factor, ex)
        moves.append(ex.source)
        if k == 4:
            factor = p4_normalize(L, factor)
        if factor_weight(L, factor) == 0:
            return _done(L, factor, "template", moves)
        visited.add(factor.edge_set)

    for size in (2, 3):
        ex = repartition_search(L, factor, max_paths=size, min_paths=1 if size == 2 else 3)
        if ex is not None:
            factor = apply_exchange(L, factor, ex)
            moves.append(ex.source)
            return _done(L, factor, f"repartition{size}", moves)

    if n <= exhaustive_limit:
        logger.warning("falling back to exhaustive search for P{} on n={}", k, n)
        best, e = min_abs_weight_exhaustive(L, pattern)
        if best == 0:
            moves.append("exhaustive")
            return _done(L, PathFactor.from_embedding(pattern, e, k), "exhaustive", moves)

    report = _report(L, factor)
    log("SOLVE", f"factor:P{k}", f"n={n} unresolved weight={report.best_weight}", success=False)
    msg = f"no zero-sum P{k}-factor found for n={n} (best weight {report.best_weight})"
    raise Unresolved(msg, report)


def solve_p3(L: EdgeLabeling, **kwargs) -> FactorSolution:
    return solve_path_factor(L, 3, **kwargs)


def solve_p4(L: EdgeLabeling, **kwargs) -> FactorSolution:
    return solve_path_factor(L, 4, **kwargs)


# Factor files


def dumps_factor(L: EdgeLabeling, factor: PathFactor) -> str:
    lines = [f"factor k={factor.k} weight={factor_weight(L, factor)}"]
    for p in sorted(factor.paths, key=min):
        lines.append(" ".join(str(v) for v in p))
    return "\n".join(lines) + "\n"


def loads_factor(text: str) -> tuple[PathFactor, int]:
    """Parse a factor file into (factor, declared weight); paths keep their order."""
    lines = text.strip("\n").split("\n")
    head = lines[0].split()
    try:
        if len(head) != 3 or head[0] != "factor":
            raise ValueError
        k = int(head[1].removeprefix("k="))
        declared = int(head[2].removeprefix("weight="))
        paths = tuple(tuple(int(x) for x in line.split()) for line in lines[1:] if line.strip())
    except ValueError:
        msg = f"malformed factor file starting {lines[0]!r}"
        raise FormatError(msg) from None
    return PathFactor(k, paths), declared
