import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zerosum_forests.errors import InternalError
from zerosum_forests.factorsolve import PathFactor, _holds, apply_exchange, factor_weight, instantiate
from zerosum_forests.graphcore import EdgeLabeling, from_positive_set, iter_edges, norm_edge, random_labeling
from zerosum_forests.templates import PM, PP, Template, _t, catalog

ALL_TEMPLATES = [*catalog(3), *catalog(4)]


def _slot_orders(t: Template) -> tuple[tuple[int, ...], ...]:
    k = t.k
    return tuple(tuple(s * k + i for i in range(k)) for s in range(t.slots))


def synthetic(t: Template, background: EdgeLabeling | None = None) -> EdgeLabeling:
    """Labels where every slot reads its type and every added edge its required sign."""
    orders = _slot_orders(t)
    n = t.slots * t.k
    labels = {e: 1 for e in iter_edges(n)}
    if background is not None:
        labels = {(a, b): background.label(a, b) for a, b in iter_edges(n)}
    for s, order in enumerate(orders):
        for i, sign in enumerate(t.types[s]):
            labels[norm_edge(order[i], order[i + 1])] = sign
    for ((sa, ia), (sb, ib)), sign in t.added:
        labels[norm_edge(orders[sa][ia], orders[sb][ib])] = sign
    return from_positive_set(n, [e for e, sign in labels.items() if sign > 0])


def _check(t: Template, L: EdgeLabeling) -> None:
    orders = _slot_orders(t)
    assert _holds(L.signs, orders, t), t.name
    factor = PathFactor.from_paths(t.k, orders)
    ex = instantiate(L, orders, orders, t)
    assert ex.delta == t.delta, t.name
    result = apply_exchange(L, factor, ex)
    result.validate(L.n)
    assert factor_weight(L, result) == factor_weight(L, factor) + t.delta


class TestCatalog:
    def test_sizes(self) -> None:
        """P3 has twelve entries; matchings have none."""
        assert len(catalog(3)) == 12
        assert catalog(2) == ()
        assert len(catalog(4)) > 100

    def test_names_unique(self) -> None:
        """Template names identify entries."""
        names = [t.name for t in ALL_TEMPLATES]
        assert len(names) == len(set(names))

    def test_deltas(self) -> None:
        """Direct templates lower the weight by 2, sign flips by 4."""
        assert {t.delta for t in ALL_TEMPLATES} == {-2, -4}
        flips = [t.name for t in ALL_TEMPLATES if t.endgame]
        assert flips == ["++|++/flip", "-+-|-+-/flip", "+--|+--/a-flip", "+--|+--/b-flip"]

    def test_slots(self) -> None:
        """Templates use one to three paths of matching length."""
        for t in ALL_TEMPLATES:
            assert 1 <= t.slots <= 3
            assert all(len(x) == t.k - 1 for x in t.types)

    def test_declared_delta_checked(self) -> None:
        """A template whose labels disagree with its delta is rejected."""
        with pytest.raises(InternalError, match="delta"):
            _t("bad", [PP], "u1u2", "u1u3-", -4)

    def test_removed_must_be_path_edge(self) -> None:
        """Removing a chord is not allowed."""
        with pytest.raises(InternalError, match="path edge"):
            _t("bad", [PM], "u1u3", "u1u2-", -2)


class TestSoundness:
    @pytest.mark.parametrize("t", ALL_TEMPLATES, ids=lambda t: t.name)
    def test_yields_factor_with_declared_delta(self, t: Template) -> None:
        """On its own configuration each template gives a factor and exactly its delta."""
        _check(t, synthetic(t))

    @settings(max_examples=50, deadline=None)
    @given(st.sampled_from(ALL_TEMPLATES), st.integers(min_value=0, max_value=2**64 - 1))
    def test_background_labels_do_not_matter(self, t: Template, seed: int) -> None:
        """Labels outside the template's edges never change the outcome."""
        n = t.slots * t.k
        _check(t, synthetic(t, random_labeling(n, seed)))
