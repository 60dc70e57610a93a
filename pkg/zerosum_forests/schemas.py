from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator


class BaseSchema(BaseModel):
    """Base schema with common configuration for zerosum_forests results"""

    model_config = ConfigDict(
        validate_assignment=True,
        use_enum_values=True,
    )

    def report_lines(self, exclude: set[str] | None = None) -> list[str]:
        """Render fields as key=value lines in declaration order.

        Lists are space separated; None is rendered as "-".
        """
        lines = []
        for key, value in self.model_dump(exclude=exclude or set()).items():
            lines.append(f"{key}={_render(value)}")
        return lines


def _render(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return " ".join(_render(v) for v in value)
    if isinstance(value, dict):
        return ",".join(f"{k}:{_render(v)}" for k, v in value.items())
    return str(value)


class StarResult(BaseSchema):
    model_config = ConfigDict(frozen=True)

    center: int = Field(..., ge=0)
    abs_weight: int = Field(..., ge=0)
    pos_degree: int = Field(..., ge=0)
    n: int = Field(..., ge=1)

    @model_validator(mode="after")
    def _weight_matches_degree(self):
        if self.abs_weight != abs(2 * self.pos_degree - (self.n - 1)):
            msg = "abs_weight must equal |2·pos_degree − (n−1)|"
            raise ValueError(msg)
        return self


class UnresolvedReport(BaseSchema):
    """What the factor solver knew when every stage came up empty.

    claim_failures lists the proof claims whose conclusions the best factor
    violates. Those are the places a zero-sum exchange should have existed.
    """

    n: int
    k: int
    best_weight: int
    best_factor: list[list[int]]
    type_census: dict[str, int]
    claim_failures: list[str] = Field(default_factory=list)
    diagnostics: list[str] = Field(default_factory=list)


class ConjectureReport(BaseSchema):
    conjecture: Literal[1, 2]
    n: int
    pattern: str
    mode: Literal["exhaustive", "canonical", "sampled"]
    seed: int | None = None
    samples: int | None = None
    tested: int = 0
    worst_min: int = 0
    bound: float
    unresolved: int = 0
    witness: str | None = Field(default=None, description="ZSG text of the worst labeling")
    note: str | None = None
    verdict: Literal["consistent", "COUNTEREXAMPLE"] = "consistent"

    @model_validator(mode="after")
    def _verdict_matches_bound(self):
        expected = "COUNTEREXAMPLE" if self.worst_min > self.bound else "consistent"
        if self.verdict != expected:
            msg = f"verdict {self.verdict} contradicts worst_min={self.worst_min}, bound={self.bound}"
            raise ValueError(msg)
        return self


class Lemma1Certificate(BaseSchema):
    model_config = ConfigDict(frozen=True)

    point: list[float]
    value: float
    exact_value: str
    sum_residual: float
    halfspace_residual: float
    distance_to_expected: float
    certified: bool
