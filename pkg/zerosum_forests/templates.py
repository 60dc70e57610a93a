"""Edge-exchange templates for weight-2 path factors, stored as data.

A template names one to three factor paths ("slots") by the letters u, v, w,
with vertices u1..uk along the path in the slot's oriented type. It removes
path edges, adds edges with required labels, and lowers the factor weight by
`delta` whenever the labels match. Every template is structural: applied to
any paths of the stated types it yields a factor again.

delta = -2 reaches weight 0 directly. delta = -4 flips the factor to weight
-2, where the same catalog applies to the negated labeling.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cache
from itertools import product

from zerosum_forests.errors import InternalError

SlotVertex = tuple[int, int]
SlotEdge = tuple[SlotVertex, SlotVertex]

LETTERS = "uvw"
_EDGE_RE = re.compile(r"([uvw])(\d)([uvw])(\d)([+-]?)")

# oriented P3 types
PP = (1, 1)
PM = (1, -1)
MM = (-1, -1)

# oriented P4 types
PPP = (1, 1, 1)
PMP = (1, -1, 1)
PPM = (1, 1, -1)
MPM = (-1, 1, -1)
PMM = (1, -1, -1)
MMM = (-1, -1, -1)


@dataclass(frozen=True)
class Template:
    name: str
    types: tuple[tuple[int, ...], ...]
    removed: tuple[SlotEdge, ...]
    added: tuple[tuple[SlotEdge, int], ...]
    delta: int

    @property
    def k(self) -> int:
        return len(self.types[0]) + 1

    @property
    def slots(self) -> int:
        return len(self.types)

    @property
    def endgame(self) -> bool:
        return self.delta == -4

    def label_delta(self) -> int:
        """Σ added labels − Σ removed labels, read off the slot types."""
        removed = 0
        for (s, i), (_, _) in self.removed:
            removed += self.types[s][i]
        return sum(sign for _, sign in self.added) - removed


def _vertex(letter: str, index: str) -> SlotVertex:
    return LETTERS.index(letter), int(index) - 1


def _parse(text: str, signed: bool) -> list:
    out = []
    for part in filter(None, (p.strip() for p in text.split(","))):
        m = _EDGE_RE.fullmatch(part)
        if not m or bool(m.group(5)) != signed:
            msg = f"bad template edge {part!r}"
            raise InternalError(msg)
        a, b = _vertex(m.group(1), m.group(2)), _vertex(m.group(3), m.group(4))
        edge = (min(a, b), max(a, b))
        out.append((edge, 1 if m.group(5) == "+" else -1) if signed else edge)
    return out


def _t(name: str, types, removed: str, added: str, delta: int) -> Template:
    t = Template(
        name=name,
        types=tuple(tuple(x) for x in types),
        removed=tuple(_parse(removed, signed=False)),
        added=tuple(_parse(added, signed=True)),
        delta=delta,
    )
    k = t.k
    for (s, i), (s2, j) in t.removed:
        if s != s2 or j != i + 1 or j >= k:
            msg = f"template {name}: removed edge is not a path edge"
            raise InternalError(msg)
    if t.label_delta() != delta:
        msg = f"template {name}: labels give delta {t.label_delta()}, declared {delta}"
        raise InternalError(msg)
    return t


def _cross(left: tuple[str, ...], right: tuple[str, ...]) -> list[str]:
    return [a + b for a, b in product(left, right)]


U12, U34, V12, V34 = ("u1", "u2"), ("u3", "u4"), ("v1", "v2"), ("v3", "v4")


def _p3_catalog() -> list[Template]:
    return [
        _t("chord/++", [PP], "u1u2", "u1u3-", -2),
        _t("chord/+-", [PM], "u1u2", "u1u3-", -2),
        _t("++|+-/a", [PP, PM], "u1u2,v2v3", "u1v1-,u3v3-", -2),
        _t("++|+-/b", [PP, PM], "u2u3,v1v2", "u1v1-,u3v3+", -2),
        _t("++|+-/c", [PP, PM], "u2u3,v1v2", "u1v1+,u3v3-", -2),
        _t("++|--/a", [PP, MM], "u1u2,v2v3", "u1v1-,u3v3-", -2),
        _t("++|--/b", [PP, MM], "u1u2,u2u3,v1v2", "u1v1-,u1u3+,u2v2-", -2),
        _t("+-|+-/a", [PM, PM], "u2u3,v1v2", "u1v1-,u3v3-", -2),
        _t("+-|+-/b", [PM, PM], "u1u2,v1v2,v2v3", "u1v1-,u1v2-,u3v3+", -2),
        _t("+-|+-/c", [PM, PM], "u1u2,v1v2,v2v3", "u1v1+,u1v2-,u2v3-", -2),
        _t("++|++/a", [PP, PP], "u1u2,v2v3", "u1v1-,u3v3+", -2),
        _t("++|++/flip", [PP, PP], "u1u2,v2v3", "u1v1-,u3v3-", -4),
    ]


def _p4_catalog() -> list[Template]:
    ts: list[Template] = []
    add = ts.append

    for t in (PPP, PMP, PPM, MPM, PMM):
        for i, sign in enumerate(t):
            if sign > 0:
                name = f"closing/{_type_str(t)}/{i + 1}"
                add(_t(name, [t], f"u{i + 1}u{i + 2}", "u1u4-", -2))
    for t in (PPP, PPM, MPM):
        for chord in ("u1u3", "u2u4"):
            add(_t(f"middle/{_type_str(t)}/{chord}", [t], "u2u3", f"{chord}-", -2))

    # +++ with ++-
    for i, (e1, e2) in enumerate(product(_cross(U12, V12), _cross(U34, V34))):
        add(_t(f"+++|++-/a{i}", [PPP, PPM], "u2u3,v2v3", f"{e1}+,{e2}-", -2))
        add(_t(f"+++|++-/d{i}", [PPP, PPM], "u2u3,v2v3", f"{e1}-,{e2}+", -2))
    for i, (a, b) in enumerate(product(U12, U34)):
        add(_t(f"+++|++-/b{i}", [PPP, PPM], "u2u3,v1v2,v3v4", f"{a}v1-,{b}v3-,v1v4+", -2))
        add(_t(f"+++|++-/b{i}'", [PPP, PPM], "u2u3,v1v2,v3v4", f"{a}v2-,{b}v4-,v1v4+", -2))
        add(_t(f"+++|++-/c{i}", [PPP, PPM], "u2u3,v1v2,v2v3,v3v4", f"{a}v2-,{b}v3-,v1v3+,v2v4+", -2))
        add(_t(f"+++|++-/c{i}'", [PPP, PPM], "u2u3,v1v2,v2v3,v3v4", f"{a}v1-,{b}v4-,v1v3+,v2v4+", -2))

    # +++ with -+-
    add(_t("+++|-+-/a", [PPP, MPM], "u1u2,u2u3,v2v3,v3v4", "u2v2-,u4v4-,u1u3+,v1v3+", -2))
    add(_t("+++|-+-/b", [PPP, MPM], "u2u3,v2v3", "u2v2-,u4v4+", -2))
    add(_t("+++|-+-/c", [PPP, MPM], "u2u3,v2v3", "u1v1-,u3v3+", -2))

    # ++- with -+- and ++- with ++-
    for other, tag in ((MPM, "++-|-+-"), (PPM, "++-|++-")):
        add(_t(f"{tag}/a", [PPM, other], "u1u2,u3u4,v2v3", "u2v2-,u4v4-,u1u4+", -2))
        add(_t(f"{tag}/b", [PPM, other], "u2u3,v2v3", "u2v2+,u4v4-", -2))
        add(_t(f"{tag}/c", [PPM, other], "u2u3,v2v3", "u2v2-,u4v4+", -2))
    add(_t("++-|++-/d", [PPM, PPM], "u2u3,v2v3", "u3v2-,u2v3+", -2))
    add(_t("++-|++-/e", [PPM, PPM], "u1u2,u2u3,u3u4,v2v3", "u3v2-,u2v3-,u1u3+,u2u4+", -2))

    # +++ with +++, and the triple that rules out an all-negative pair
    add(_t("+++|+++/a", [PPP, PPP], "u2u3,v2v3", "u2v2-,u4v4+", -2))
    for t in (PPM, MPM, PMM):
        add(_t(f"+++|+++|{_type_str(t)}", [PPP, PPP, t], "u1u2,v1v2,w3w4", "u1v2-,u2v1-,w1w4+", -2))

    # +++ with ---
    for i, (e1, e2) in enumerate(product(_cross(U12, V12), _cross(U34, V34))):
        add(_t(f"+++|---/a{i}", [PPP, MMM], "u2u3,v2v3", f"{e1}-,{e2}-", -2))
    add(_t("+++|---/b", [PPP, MMM], "u1u2,u2u3,v1v2,v2v3", "u1v1-,u2v1-,u2v2-,u3v3+", -2))

    # +++ with +--
    add(_t("+++|+--/a", [PPP, PMM], "u1u2,u3u4,v1v2,v3v4", "u1v1-,u2v2-,u1u4+,v1v4+", -2))
    add(_t("+++|+--/b", [PPP, PMM], "u1u2,u2u3,v1v2", "u1v1-,u2v2+,u1u3+", -2))
    add(_t("+++|+--/c", [PPP, PMM], "u3u4,v1v2", "u1v1+,u4v4-", -2))

    # ++- with +--
    add(_t("++-|+--/a", [PPM, PMM], "u2u3,v2v3", "u3v1-,u2v4-", -2))
    add(_t("++-|+--/b", [PPM, PMM], "u1u2,u2u3,v1v2", "u3v1-,u2v4+,u1u4+", -2))
    add(_t("++-|+--/c", [PPM, PMM], "u1u2,v1v2", "u1v2+,u2v1-", -2))
    add(_t("++-|+--/d", [PPM, PMM], "u1u2,u2u3,v1v2,v2v3", "u1v2-,u2v1-,u1u4+,v1v4+", -2))
    add(_t("++-|+--/e", [PPM, PMM], "u1u2,v1v2", "u1v2-,u2v1+", -2))

    # -+- with +--
    for i, (a, b) in enumerate(product(U12, U34)):
        add(_t(f"-+-|+--/a{i}", [MPM, PMM], "u2u3,v1v2,v3v4", f"{a}v2-,{b}v4-,v1v4+", -2))
        add(_t(f"-+-|+--/b{i}", [MPM, PMM], "u2u3,v2v3", f"{a}v1-,{b}v3-", -2))

    # ++- and -+- with ---
    for t in (PPM, MPM):
        for i, (e1, e2) in enumerate(product(_cross(U12, V12), _cross(U34, V34))):
            name = f"{_type_str(t)}|---/{i}"
            add(_t(name, [t, MMM], "u2u3,v2v3", f"{e1}-,{e2}-", -2))

    # +-- with ---
    for i, (a, b) in enumerate(product(("u1v1", "u1v3"), ("u2v4", "u4v4"))):
        add(_t(f"+--|---/a{i}", [PMM, MMM], "u1u2,v3v4", f"{a}-,{b}-", -2))
    for i, (a, b) in enumerate(product(("u1v2", "u1v4"), ("u2v1", "u4v1"))):
        add(_t(f"+--|---/b{i}", [PMM, MMM], "u1u2,v1v2", f"{a}-,{b}-", -2))

    # -+- with -+-
    add(_t("-+-|-+-/a", [MPM, MPM], "u2u3,v2v3", "u1v1-,u3v3+", -2))
    add(_t("-+-|-+-/flip", [MPM, MPM], "u2u3,v2v3", "u1v1-,u3v3-", -4))

    # +-- with +--
    add(_t("+--|+--/a", [PMM, PMM], "u1u2,v1v2", "u2v1-,u1v2+", -2))
    add(_t("+--|+--/a-flip", [PMM, PMM], "u1u2,v1v2", "u2v1-,u1v2-", -4))
    add(_t("+--|+--/b", [PMM, PMM], "u1u2,u2u3,v1v2", "u1v1-,u3v1-,u2v2+", -2))
    add(_t("+--|+--/b-flip", [PMM, PMM], "u1u2,u2u3,v1v2", "u1v1-,u3v1-,u2v2-", -4))
    return ts


def _type_str(t: tuple[int, ...]) -> str:
    return "".join("+" if s > 0 else "-" for s in t)


@cache
def catalog(k: int) -> tuple[Template, ...]:
    """Templates for P_k-factors; empty for k = 2."""
    if k == 3:
        return tuple(_p3_catalog())
    if k == 4:
        return tuple(_p4_catalog())
    return ()
