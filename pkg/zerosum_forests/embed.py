"""Forest patterns, their copies in K_n, and the exhaustive copy oracle.

A copy of a spanning forest F is an edge set of K_n isomorphic to E(F).
Copies are enumerated once each: components are placed in order of their
smallest host vertex, equal components are used in a fixed order, and each
component contributes one placement per distinct host edge set.
"""

from __future__ import annotations

import re
from collections.abc import Callable, Iterator
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, groupby, permutations
from math import factorial, prod

import networkx as nx
from loguru import logger

from zerosum_forests.errors import DivisibilityError, FormatError, InvalidEmbedding, SpecError, TooLarge
from zerosum_forests.graphcore import Edge, EdgeLabeling, norm_edge

MAX_COPIES = 10**9

_EDGE_RE = re.compile(r"^\s*(\d+)\s*-\s*(\d+)\s*$")


@dataclass(frozen=True)
class ForestPattern:
    """Abstract spanning forest on vertices 0..n−1."""

    n: int
    edges: tuple[Edge, ...]
    name: str = "edges"

    @cached_property
    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        for row in adj:
            row.sort()
        return adj

    @cached_property
    def degrees(self) -> list[int]:
        return [len(row) for row in self.adjacency]

    @property
    def max_degree(self) -> int:
        return max(self.degrees, default=0)

    @cached_property
    def graph(self) -> nx.Graph:
        G = nx.Graph()
        G.add_nodes_from(range(self.n))
        G.add_edges_from(self.edges)
        return G

    @cached_property
    def components(self) -> list[tuple[int, ...]]:
        """Vertex sets of the trees, each sorted, ordered by smallest vertex."""
        return sorted(tuple(sorted(c)) for c in nx.connected_components(self.graph))

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)


@dataclass(frozen=True)
class Embedding:
    """Bijection pattern vertex -> host vertex, stored as the image tuple."""

    map: tuple[int, ...]

    @cached_property
    def inverse(self) -> tuple[int, ...]:
        inv = [0] * len(self.map)
        for p, h in enumerate(self.map):
            inv[h] = p
        return tuple(inv)

    def image_edges(self, F: ForestPattern) -> set[Edge]:
        m = self.map
        return {norm_edge(m[a], m[b]) for a, b in F.edges}

    @classmethod
    def identity(cls, n: int) -> Embedding:
        return cls(tuple(range(n)))


def make_pattern(n: int, edges, name: str = "edges") -> ForestPattern:
    """Validate and normalize an edge list into a ForestPattern.

    Raises:
        SpecError: out-of-range vertex, loop, repeated edge or cycle
    """
    if n < 1:
        msg = f"pattern needs at least one vertex, got n={n}"
        raise SpecError(msg)
    normed = []
    for a, b in edges:
        if a == b or not (0 <= a < n and 0 <= b < n):
            msg = f"invalid pattern edge {a}-{b} for n={n}"
            raise SpecError(msg)
        normed.append(norm_edge(a, b))
    if len(set(normed)) != len(normed):
        msg = "pattern repeats an edge"
        raise SpecError(msg)
    F = ForestPattern(n, tuple(sorted(normed)), name)
    if not nx.is_forest(F.graph):
        cycle = nx.find_cycle(F.graph)
        msg = f"pattern edges {', '.join(f'{a}-{b}' for a, b in cycle)} close a cycle"
        raise SpecError(msg)
    return F


def _blocks(n: int, k: int, shape: Callable[[int], list[Edge]], name: str) -> ForestPattern:
    if k < 2:
        msg = f"component size must be at least 2, got {k}"
        raise SpecError(msg)
    if n % k:
        msg = f"{name} needs {k} | n, got n={n}"
        raise DivisibilityError(msg)
    edges = [(b + x, b + y) for b in range(0, n, k) for x, y in shape(k)]
    return make_pattern(n, edges, name)


def _path_edges(k: int) -> list[Edge]:
    return [(i, i + 1) for i in range(k - 1)]


def _star_edges(k: int) -> list[Edge]:
    return [(0, i) for i in range(1, k)]


def path_factor(n: int, k: int) -> ForestPattern:
    return _blocks(n, k, _path_edges, f"factor:P{k}")


def broom(n: int, head: int) -> ForestPattern:
    """Star with `head` leaves at vertex 0, plus a path tail hanging off leaf `head`.

    Δ = head for head ≥ 2.
    """
    if not 1 <= head <= n - 1:
        msg = f"broom head must be in 1..{n - 1}, got {head}"
        raise SpecError(msg)
    edges = _star_edges(head + 1) + [(v, v + 1) for v in range(head, n - 1)]
    return make_pattern(n, edges, f"broom:{head}")


def parse_pattern(spec: str, n: int) -> ForestPattern:
    """Build a pattern from its text spec.

    Accepted specs: star, path, matching, factor:P<k>, factor:S<k>,
    broom:<head>, edges:<i-j,...>.
    """
    spec = spec.strip()
    if n < 1:
        msg = f"pattern needs at least one vertex, got n={n}"
        raise SpecError(msg)
    if spec == "star":
        return make_pattern(n, _star_edges(n), "star")
    if spec == "path":
        return make_pattern(n, _path_edges(n), "path")
    if spec == "matching":
        if n % 2:
            msg = f"matching needs even n, got n={n}"
            raise DivisibilityError(msg)
        return _blocks(n, 2, _path_edges, "matching")
    if m := re.fullmatch(r"factor:([PS])(\d+)", spec):
        kind, k = m.group(1), int(m.group(2))
        shape = _path_edges if kind == "P" else _star_edges
        return _blocks(n, k, shape, f"factor:{kind}{k}")
    if m := re.fullmatch(r"broom:(\d+)", spec):
        return broom(n, int(m.group(1)))
    if spec.startswith("edges:"):
        body = spec[len("edges:") :]
        edges = []
        for part in filter(None, body.split(",")):
            em = _EDGE_RE.match(part)
            if not em:
                msg = f"bad edge {part!r} in pattern spec"
                raise SpecError(msg)
            edges.append((int(em.group(1)), int(em.group(2))))
        return make_pattern(n, edges, spec)
    msg = f"unknown pattern spec {spec!r}"
    raise SpecError(msg)


def check_embedding(F: ForestPattern, e: Embedding, n: int | None = None) -> None:
    size = F.n if n is None else n
    if size != F.n:
        msg = f"pattern has {F.n} vertices, host has {size}"
        raise InvalidEmbedding(msg)
    if len(e.map) != F.n or sorted(e.map) != list(range(F.n)):
        msg = f"embedding {list(e.map)} is not a bijection onto 0..{F.n - 1}"
        raise InvalidEmbedding(msg)


def weight(L: EdgeLabeling, F: ForestPattern, e: Embedding) -> int:
    check_embedding(F, e, L.n)
    s, m = L.signs, e.map
    return sum(s[m[a]][m[b]] for a, b in F.edges)


# Tree shapes


def _centers(vertices: tuple[int, ...], adj: list[list[int]]) -> list[int]:
    tree = nx.Graph()
    tree.add_nodes_from(vertices)
    tree.add_edges_from((v, w) for v in vertices for w in adj[v] if v < w)
    return sorted(nx.center(tree))


def _rooted(adj: list[list[int]], root: int, parent: int) -> tuple[str, int]:
    """AHU code and automorphism count of the subtree at root."""
    kids = sorted(_rooted(adj, c, root) for c in adj[root] if c != parent)
    aut = prod(k[1] for k in kids)
    for _, group in groupby(kids, key=lambda k: k[0]):
        aut *= factorial(len(list(group)))
    return "(" + "".join(k[0] for k in kids) + ")", aut


def tree_shape(vertices: tuple[int, ...], adj: list[list[int]]) -> tuple[str, int]:
    """Canonical code and automorphism count of the tree spanned by vertices."""
    centers = _centers(vertices, adj)
    if len(centers) == 1:
        return _rooted(adj, centers[0], -1)
    a, b = centers
    code_a, aut_a = _rooted(adj, a, b)
    code_b, aut_b = _rooted(adj, b, a)
    lo, hi = sorted((code_a, code_b))
    aut = aut_a * aut_b * (2 if code_a == code_b else 1)
    return "[" + lo + hi + "]", aut


def automorphism_count(F: ForestPattern) -> int:
    shapes = [tree_shape(c, F.adjacency) for c in F.components]
    total = 1
    for _, group in groupby(sorted(shapes)):
        members = list(group)
        total *= factorial(len(members)) * members[0][1] ** len(members)
    return total


def copy_count(F: ForestPattern) -> int:
    """Number of distinct copies of F in K_n: n!/|Aut(F)|."""
    return factorial(F.n) // automorphism_count(F)


@dataclass
class _Component:
    vertices: tuple[int, ...]
    local_edges: list[tuple[int, int]]
    placements: list[tuple[int, ...]]


def tree_placements(vertices: tuple[int, ...], adj: list[list[int]]) -> tuple[tuple[int, ...], list, list]:
    """Vertex order, local edges and distinct index placements of one tree.

    A placement p sends order[i] to the p[i]-th smallest host of the set.
    """
    k = len(vertices)
    degree = {v: len(adj[v]) for v in vertices}
    if k <= 2 or max(degree.values()) <= 2:
        start = min(v for v in vertices if degree[v] <= 1)
        order = [start]
        prev = -1
        while len(order) < k:
            cur = order[-1]
            nxt = next(w for w in adj[cur] if w != prev)
            prev = cur
            order.append(nxt)
        placements = [p for p in permutations(range(k)) if p[0] < p[-1]] if k > 1 else [(0,)]
    elif max(degree.values()) == k - 1:
        center = next(v for v in vertices if degree[v] == k - 1)
        order = [center] + [v for v in vertices if v != center]
        placements = []
        for c in range(k):
            placements.append((c, *(i for i in range(k) if i != c)))
    else:
        order = list(vertices)
        placements = None
    pos = {v: i for i, v in enumerate(order)}
    local = sorted({norm_edge(pos[v], pos[w]) for v in order for w in adj[v]})
    if placements is None:
        seen = set()
        placements = []
        for p in permutations(range(k)):
            key = frozenset(norm_edge(p[a], p[b]) for a, b in local)
            if key not in seen:
                seen.add(key)
                placements.append(p)
    return tuple(order), local, placements


def _component_classes(F: ForestPattern) -> list[list[_Component]]:
    by_shape: dict[str, list[_Component]] = {}
    for comp in F.components:
        code, _ = tree_shape(comp, F.adjacency)
        order, local, placements = tree_placements(comp, F.adjacency)
        by_shape.setdefault(code, []).append(_Component(order, local, placements))
    return [by_shape[code] for code in sorted(by_shape, key=lambda c: (len(c), c))]


def _iter_weighted(F: ForestPattern, signs: list[list[int]] | None) -> Iterator[tuple[int, tuple[int, ...]]]:
    n = F.n
    classes = _component_classes(F)
    used = [False] * n
    mapping = [0] * n
    taken = [0] * len(classes)

    def rec(start: int, acc: int) -> Iterator[tuple[int, tuple[int, ...]]]:
        s = start
        while s < n and used[s]:
            s += 1
        if s == n:
            yield acc, tuple(mapping)
            return
        used[s] = True
        rest = [v for v in range(s + 1, n) if not used[v]]
        for ci, members in enumerate(classes):
            if taken[ci] == len(members):
                continue
            comp = members[taken[ci]]
            taken[ci] += 1
            k = len(comp.vertices)
            for others in combinations(rest, k - 1):
                hosts = (s, *others)
                for v in others:
                    used[v] = True
                for p in comp.placements:
                    images = [hosts[i] for i in p]
                    w = 0
                    if signs is not None:
                        w = sum(signs[images[a]][images[b]] for a, b in comp.local_edges)
                    for pv, h in zip(comp.vertices, images, strict=True):
                        mapping[pv] = h
                    yield from rec(s + 1, acc + w)
                for v in others:
                    used[v] = False
            taken[ci] -= 1
        used[s] = False

    yield from rec(0, 0)


def _guard(F: ForestPattern, max_copies: int) -> int:
    count = copy_count(F)
    if count > max_copies:
        msg = f"{F.name} on n={F.n} has {count} copies, above the limit {max_copies}"
        raise TooLarge(msg)
    return count


def iter_copies(
    L: EdgeLabeling, F: ForestPattern, max_copies: int = MAX_COPIES
) -> Iterator[tuple[int, Embedding]]:
    """Yield (weight, embedding) for every distinct copy of F in K_n."""
    if L.n != F.n:
        msg = f"pattern has {F.n} vertices, labeling has {L.n}"
        raise InvalidEmbedding(msg)
    _guard(F, max_copies)
    for w, m in _iter_weighted(F, L.signs):
        yield w, Embedding(m)


def enumerate_copies(
    F: ForestPattern,
    n: int,
    visitor: Callable[[Embedding], object] | None = None,
    max_copies: int = MAX_COPIES,
) -> int:
    """Visit each distinct copy of F once and return how many there were."""
    if F.n != n:
        msg = f"pattern has {F.n} vertices, host has {n}"
        raise SpecError(msg)
    _guard(F, max_copies)
    count = 0
    for _, m in _iter_weighted(F, None):
        count += 1
        if visitor is not None:
            visitor(Embedding(m))
    return count


def min_abs_weight_exhaustive(
    L: EdgeLabeling, F: ForestPattern, max_copies: int = MAX_COPIES
) -> tuple[int, Embedding]:
    """Exact minimum of |c(E(F'))| over all copies, with a witness.

    Stops early once the parity floor |E(F)| mod 2 is reached.
    """
    floor = len(F.edges) % 2
    best: tuple[int, Embedding] | None = None
    visited = 0
    for w, e in iter_copies(L, F, max_copies):
        visited += 1
        if best is None or abs(w) < best[0]:
            best = (abs(w), e)
            if best[0] == floor:
                break
    logger.debug("exhaustive {} n={}: min={} after {} copies", F.name, F.n, best and best[0], visited)
    if best is None:
        msg = "pattern has no copies"
        raise TooLarge(msg)
    return best


# Embedding files


def dumps_embedding(L: EdgeLabeling, F: ForestPattern, e: Embedding) -> str:
    head = f"embedding pattern={F.name.replace(' ', '')} weight={weight(L, F, e)}"
    return head + "\n" + " ".join(str(h) for h in e.map) + "\n"


def loads_embedding(text: str) -> tuple[str, int, Embedding]:
    """Parse an embedding file into (pattern spec, declared weight, embedding)."""
    lines = text.strip("\n").split("\n")
    head = lines[0].split()
    try:
        if len(lines) != 2 or len(head) != 3 or head[0] != "embedding" or not head[1].startswith("pattern="):
            raise ValueError
        spec = head[1].removeprefix("pattern=")
        declared = int(head[2].removeprefix("weight="))
        images = tuple(int(x) for x in lines[1].split())
    except ValueError:
        msg = f"malformed embedding file starting {lines[0]!r}"
        raise FormatError(msg) from None
    return spec, declared, Embedding(images)
