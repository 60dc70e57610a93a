import numpy as np
import pytest
from loguru import logger

from zerosum_forests.errors import (
    DivisibilityError,
    InternalError,
    ParityError,
    SpecError,
    TooLarge,
    Unresolved,
    ZeroSumError,
    format_error,
)
from zerosum_forests.lib import log, set_logging
from zerosum_forests.schemas import ConjectureReport, StarResult, UnresolvedReport
from zerosum_forests.sweep import run_map
from zerosum_forests.utils import convert_numpy_list_to_python, convert_numpy_to_python


def _square(x: int) -> int:
    return x * x


@pytest.fixture
def captured():
    set_logging(False)
    messages: list[str] = []
    handler = logger.add(messages.append, format="{level} {message}")
    yield messages
    logger.remove(handler)


class TestLog:
    def test_success_line(self, captured: list[str]) -> None:
        """Successful actions log at INFO in the structured layout."""
        log("SOLVE", "factor:P3", "n=9")
        assert captured == ["INFO | Action=SOLVE | Subject=factor:P3 | Detail=n=9\n"]

    def test_failure_line(self, captured: list[str]) -> None:
        """Failed actions log at ERROR."""
        log("CHECK", "extremal", "n=8 ok=False", success=False)
        assert captured[0].startswith("ERROR | Action=CHECK")

    def test_disable(self, captured: list[str]) -> None:
        """Disabled logging drops package messages."""
        set_logging(True)
        log("GENERATE", "n=8", "seed=1")
        set_logging(False)
        assert captured == []


class TestFormatError:
    @pytest.mark.parametrize(
        ("error", "prefix"),
        [
            (ParityError("odd"), "Parity Error: odd"),
            (DivisibilityError("3 does not divide 8"), "Divisibility Error:"),
            (SpecError("unknown pattern"), "Input Error:"),
            (TooLarge("too many"), "Too Large:"),
            (InternalError("bad"), "InternalError: bad"),
            (FileNotFoundError("missing.zsg"), "File Error:"),
            (KeyError("x"), "Unexpected Error:"),
        ],
    )
    def test_prefixes(self, error: Exception, prefix: str) -> None:
        """Each error family gets its own one-line prefix."""
        assert format_error(error).startswith(prefix)

    def test_hierarchy(self) -> None:
        """Input errors are ValueErrors, post-condition failures AssertionErrors."""
        assert issubclass(SpecError, ValueError)
        assert issubclass(ParityError, ZeroSumError)
        assert issubclass(InternalError, AssertionError)
        assert issubclass(TooLarge, RuntimeError)

    def test_unresolved_keeps_report(self) -> None:
        """Unresolved carries its report."""
        report = UnresolvedReport(n=16, k=4, best_weight=2, best_factor=[[0, 1, 2, 3]], type_census={})
        err = Unresolved("stuck", report)
        assert err.report is report
        assert format_error(err) == "Unresolved: stuck"


class TestSchemas:
    def test_star_result_consistency(self) -> None:
        """abs_weight must match the positive degree."""
        StarResult(center=0, abs_weight=3, pos_degree=2, n=8)
        with pytest.raises(ValueError, match="abs_weight"):
            StarResult(center=0, abs_weight=1, pos_degree=2, n=8)

    def test_verdict_follows_bound(self) -> None:
        """A report cannot claim consistency above its bound."""
        with pytest.raises(ValueError, match="contradicts"):
            ConjectureReport(conjecture=2, n=8, pattern="star", mode="sampled", worst_min=4, bound=3.0)

    def test_report_lines(self) -> None:
        """Fields render as key=value lines in declaration order."""
        result = StarResult(center=1, abs_weight=1, pos_degree=4, n=8)
        assert result.report_lines() == ["center=1", "abs_weight=1", "pos_degree=4", "n=8"]

    def test_report_lines_rendering(self) -> None:
        """None, booleans, lists and dicts have fixed renderings."""
        report = UnresolvedReport(
            n=8, k=4, best_weight=-2, best_factor=[[0, 1, 2, 3], [4, 5, 6, 7]], type_census={"(1,1,1)": 2}
        )
        lines = report.report_lines()
        assert "best_factor=0 1 2 3 4 5 6 7" in lines
        assert "type_census=(1,1,1):2" in lines
        assert "claim_failures=" in lines


class TestUtils:
    def test_numpy_scalars(self) -> None:
        """numpy scalars and arrays become builtins."""
        assert type(convert_numpy_to_python(np.int64(3))) is int
        assert type(convert_numpy_to_python(np.float64(0.5))) is float
        assert type(convert_numpy_to_python(np.bool_(True))) is bool
        assert convert_numpy_list_to_python(np.array([1.5, 2.0])) == [1.5, 2.0]


class TestRunMap:
    def test_sequential_order(self) -> None:
        """One job maps in the calling process, in order."""
        assert run_map(_square, range(5), jobs=1) == [0, 1, 4, 9, 16]

    def test_pool_keeps_order(self) -> None:
        """Several jobs still return results aligned with the input."""
        assert run_map(_square, range(20), jobs=2) == [x * x for x in range(20)]
