import pytest

from zerosum_forests.embed import broom, min_abs_weight_exhaustive, parse_pattern, weight
from zerosum_forests.errors import PreconditionError
from zerosum_forests.graphcore import (
    EdgeLabeling,
    construct_star_extremal_0mod4,
    construct_star_extremal_1mod4,
    random_zero_sum,
)
from zerosum_forests.starsolve import (
    balanced_center,
    corollary1_copy,
    degree_window,
    extremal_star_profile,
    star_weights,
    verify_extremal,
)


class TestBalancedCenter:
    def test_extremal_0mod4_is_tight(self) -> None:
        """n=8 extremal: the best star still weighs 3 = n/2 - 1."""
        result = balanced_center(construct_star_extremal_0mod4(8))
        assert result.abs_weight == 3

    def test_extremal_1mod4_picks_u1(self) -> None:
        """n=9 extremal: the best star weighs (n-5)/2 = 2, first found at u_1."""
        result = balanced_center(construct_star_extremal_1mod4(9))
        assert result.abs_weight == 2
        assert result.center == 0

    def test_random_n12(self) -> None:
        """The chosen center attains the minimum over all twelve stars."""
        L = random_zero_sum(12, 5)
        result = balanced_center(L)
        assert result.abs_weight <= 5
        assert result.abs_weight == min(abs(L.star_weight(v)) for v in range(12))

    @pytest.mark.parametrize("n", [4, 5, 8, 9, 12, 13, 16])
    def test_bound_and_window(self, n: int) -> None:
        """|weight| ≤ n/2 - 1 and the positive degree lies in [n/4, 3n/4 - 1]."""
        lo, hi = degree_window(n)
        for seed in range(50):
            L = random_zero_sum(n, seed)
            result = balanced_center(L)
            assert result.abs_weight <= n / 2 - 1
            assert lo <= result.pos_degree <= hi
            best, _ = min_abs_weight_exhaustive(L, parse_pattern("star", n))
            assert result.abs_weight == best

    def test_needs_zero_sum(self) -> None:
        """An all-positive K_4 is refused."""
        with pytest.raises(PreconditionError):
            balanced_center(EdgeLabeling(4, (1 << 6) - 1))

    def test_star_weights_vector(self) -> None:
        """star_weights lists every star weight in vertex order."""
        L = random_zero_sum(9, 2)
        assert star_weights(L).tolist() == [L.star_weight(v) for v in range(9)]


class TestExtremalProfile:
    def test_n9_profile(self) -> None:
        """u_i and even v_i give 2, odd v_i and w give 4."""
        assert extremal_star_profile(9) == [2, 2, 2, 2, 4, 2, 4, 2, 4]

    @pytest.mark.parametrize("n", [*range(4, 65, 4), *range(5, 66, 4)])
    def test_verify(self, n: int) -> None:
        """Each construction matches its profile and is zero-sum."""
        assert verify_extremal(n)

    def test_no_construction(self) -> None:
        """n = 2 mod 4 has no construction."""
        with pytest.raises(PreconditionError):
            extremal_star_profile(10)


class TestCorollary1:
    def test_extremal_star(self) -> None:
        """The spanning star of the extremal K_8 gets |weight| ≤ 3."""
        L = construct_star_extremal_0mod4(8)
        F = parse_pattern("star", 8)
        assert abs(weight(L, F, corollary1_copy(L, F))) <= 3

    def test_broom(self) -> None:
        """K_{1,5} with a two-edge tail in K_8 gets |weight| ≤ 3, as the oracle allows."""
        L = random_zero_sum(8, 11)
        F = broom(8, 5)
        w = weight(L, F, corollary1_copy(L, F))
        assert abs(w) <= 3
        best, _ = min_abs_weight_exhaustive(L, F)
        assert best <= abs(w)

    @pytest.mark.parametrize("seed", range(10))
    def test_bound_on_random_labelings(self, seed: int) -> None:
        """n=12, Δ=7: |weight| ≤ n/2 - 1."""
        L = random_zero_sum(12, seed)
        F = broom(12, 7)
        assert abs(weight(L, F, corollary1_copy(L, F))) <= 5

    def test_low_degree_refused(self) -> None:
        """A spanning path has Δ=2 < n/2 + 1."""
        with pytest.raises(PreconditionError):
            corollary1_copy(random_zero_sum(8, 0), parse_pattern("path", 8))
