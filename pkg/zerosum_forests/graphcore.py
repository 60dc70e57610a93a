"""±1-labeled complete graphs: representation, generators and the ZSG format"""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from zerosum_forests.errors import DivisibilityError, FormatError, InvalidEdge, ParityError
from zerosum_forests.rng import Xoshiro256

Edge = tuple[int, int]

ZSG_HEADER = "zsg 1"


def edge_count(n: int) -> int:
    return n * (n - 1) // 2


def edge_index(n: int, i: int, j: int) -> int:
    """Row-major upper-triangular position of the pair {i, j}."""
    if i > j:
        i, j = j, i
    return i * n - i * (i + 1) // 2 + (j - i - 1)


def iter_edges(n: int) -> Iterator[Edge]:
    for i in range(n):
        for j in range(i + 1, n):
            yield (i, j)


def norm_edge(i: int, j: int) -> Edge:
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class EdgeLabeling:
    """Labels of K_n packed in an int, bit set iff the edge is +1.

    Bit k is the edge at row-major upper-triangular position k.
    """

    n: int
    bits: int

    @property
    def m(self) -> int:
        return edge_count(self.n)

    @cached_property
    def signs(self) -> list[list[int]]:
        """Dense ±1 matrix as nested lists, 0 on the diagonal."""
        n, bits = self.n, self.bits
        rows = [[0] * n for _ in range(n)]
        k = 0
        for i in range(n):
            row = rows[i]
            for j in range(i + 1, n):
                s = 1 if (bits >> k) & 1 else -1
                row[j] = s
                rows[j][i] = s
                k += 1
        return rows

    @cached_property
    def matrix(self) -> np.ndarray:
        return np.array(self.signs, dtype=np.int64).reshape(self.n, self.n)

    def label(self, i: int, j: int) -> int:
        if i == j or not (0 <= i < self.n and 0 <= j < self.n):
            msg = f"no edge {{{i}, {j}}} in K_{self.n}"
            raise InvalidEdge(msg)
        return self.signs[i][j]

    @property
    def positive_count(self) -> int:
        return self.bits.bit_count()

    @property
    def zero_sum(self) -> bool:
        return 2 * self.positive_count == self.m

    def positive_edges(self) -> list[Edge]:
        return [e for k, e in enumerate(iter_edges(self.n)) if (self.bits >> k) & 1]

    def positive_degree(self, v: int) -> int:
        return sum(1 for s in self.signs[v] if s > 0)

    def negative_degree(self, v: int) -> int:
        return self.n - 1 - self.positive_degree(v)

    def star_weight(self, v: int) -> int:
        """Weight of the spanning star centered at v: 2·d⁺(v) − (n−1)."""
        return sum(self.signs[v])

    def permute(self, perm: list[int]) -> EdgeLabeling:
        """Relabel vertices: the edge {i, j} moves to {perm[i], perm[j]}."""
        if sorted(perm) != list(range(self.n)):
            msg = f"not a permutation of 0..{self.n - 1}: {perm}"
            raise ValueError(msg)
        bits = 0
        n = self.n
        for k, (i, j) in enumerate(iter_edges(n)):
            if (self.bits >> k) & 1:
                bits |= 1 << edge_index(n, perm[i], perm[j])
        return EdgeLabeling(n, bits)


def _check_n(n: int) -> None:
    if n < 1:
        msg = f"vertex count must be at least 1, got {n}"
        raise ValueError(msg)


def from_positive_set(n: int, pos: Iterable[Edge]) -> EdgeLabeling:
    _check_n(n)
    bits = 0
    for i, j in pos:
        if i == j or not (0 <= i < n and 0 <= j < n):
            msg = f"invalid edge ({i}, {j}) for n={n}"
            raise InvalidEdge(msg)
        bits |= 1 << edge_index(n, i, j)
    return EdgeLabeling(n, bits)


def total_weight(L: EdgeLabeling) -> int:
    return 2 * L.positive_count - L.m


def negate(L: EdgeLabeling) -> EdgeLabeling:
    return EdgeLabeling(L.n, L.bits ^ ((1 << L.m) - 1))


def random_zero_sum(n: int, seed: int) -> EdgeLabeling:
    """Uniform labeling with exactly half the edges positive.

    The edge list is shuffled by Fisher-Yates under xoshiro256** and the
    first half is labeled +1.

    Args:
        n: Vertex count, n = 0 or 1 mod 4
        seed: 64-bit seed

    Returns:
        Zero-sum labeling, identical for identical (n, seed)
    """
    _check_n(n)
    m = edge_count(n)
    if m % 2:
        msg = f"K_{n} has {m} edges, an odd number"
        raise ParityError(msg)
    order = list(range(m))
    Xoshiro256(seed).shuffle(order)
    bits = 0
    for k in order[: m // 2]:
        bits |= 1 << k
    return EdgeLabeling(n, bits)


def random_labeling(n: int, seed: int) -> EdgeLabeling:
    """Independent fair ±1 labels, not necessarily zero-sum."""
    _check_n(n)
    rng = Xoshiro256(seed)
    bits = 0
    for k in range(edge_count(n)):
        if rng.next_u64() >> 63:
            bits |= 1 << k
    return EdgeLabeling(n, bits)


def construct_star_extremal_0mod4(n: int) -> EdgeLabeling:
    """Zero-sum labeling where every spanning star has |weight| = n/2 − 1.

    u_i is vertex i−1 and v_i is vertex n/2 + i − 1 for i in 1..n/2. The
    positive edges are every u_iu_j and every u_iv_j with i + j even.
    """
    if n < 4 or n % 4:
        msg = f"construction needs n = 0 mod 4 and n >= 4, got {n}"
        raise DivisibilityError(msg)
    h = n // 2
    pos: list[Edge] = [(i - 1, j - 1) for i in range(1, h + 1) for j in range(i + 1, h + 1)]
    pos += [
        (i - 1, h + j - 1)
        for i in range(1, h + 1)
        for j in range(1, h + 1)
        if (i + j) % 2 == 0
    ]
    return from_positive_set(n, pos)


def construct_star_extremal_1mod4(n: int) -> EdgeLabeling:
    """Zero-sum labeling with star weights (n−5)/2 or (n−1)/2 in absolute value.

    u_i is vertex i−1, v_i is vertex (n−1)/2 + i − 1 and w is vertex n−1.
    Positive edges: u_iv_j with i + j even, every u_iw, v_iw for even i,
    and every u_iu_j except u_1u_2, u_3u_4, ...
    """
    if n < 5 or n % 4 != 1:
        msg = f"construction needs n = 1 mod 4 and n >= 5, got {n}"
        raise DivisibilityError(msg)
    h = (n - 1) // 2
    w = n - 1

    def u(i: int) -> int:
        return i - 1

    def v(i: int) -> int:
        return h + i - 1

    pos: list[Edge] = [
        (u(i), v(j)) for i in range(1, h + 1) for j in range(1, h + 1) if (i + j) % 2 == 0
    ]
    pos += [(u(i), w) for i in range(1, h + 1)]
    pos += [(v(i), w) for i in range(2, h + 1, 2)]
    pos += [
        (u(i), u(j))
        for i in range(1, h + 1)
        for j in range(i + 1, h + 1)
        if not (i % 2 == 1 and j == i + 1)
    ]
    return from_positive_set(n, pos)


def dumps(L: EdgeLabeling) -> str:
    lines = [ZSG_HEADER, str(L.n)]
    signs = L.signs
    for i in range(L.n - 1):
        lines.append("".join("+" if signs[i][j] > 0 else "-" for j in range(i + 1, L.n)))
    return "\n".join(lines) + "\n"


def loads(text: str) -> EdgeLabeling:
    if not text.endswith("\n"):
        msg = "ZSG text must end with a newline"
        raise FormatError(msg)
    lines = text[:-1].split("\n")
    if lines[0] != ZSG_HEADER:
        msg = f"bad ZSG header {lines[0]!r}"
        raise FormatError(msg)
    if len(lines) < 2 or not (lines[1].isascii() and lines[1].isdigit()):
        msg = "missing or malformed vertex count"
        raise FormatError(msg)
    n = int(lines[1])
    if n < 1:
        msg = f"vertex count must be at least 1, got {n}"
        raise FormatError(msg)
    rows = lines[2:]
    if len(rows) != n - 1:
        msg = f"expected {n - 1} label rows, found {len(rows)}"
        raise FormatError(msg)
    bits = 0
    k = 0
    for r, row in enumerate(rows):
        if len(row) != n - 1 - r:
            msg = f"row {r + 1} has {len(row)} labels, expected {n - 1 - r}"
            raise FormatError(msg)
        for ch in row:
            if ch == "+":
                bits |= 1 << k
            elif ch != "-":
                msg = f"invalid label character {ch!r} in row {r + 1}"
                raise FormatError(msg)
            k += 1
    return EdgeLabeling(n, bits)


def write(L: EdgeLabeling, path: str | Path) -> None:
    Path(path).write_text(dumps(L), encoding="utf-8", newline="\n")


def read(path: str | Path) -> EdgeLabeling:
    try:
        with open(path, encoding="utf-8", newline="") as f:
            text = f.read()
    except UnicodeDecodeError as err:
        msg = f"{path} is not UTF-8 text"
        raise FormatError(msg) from err
    return loads(text)
