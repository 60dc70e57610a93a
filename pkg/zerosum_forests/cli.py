"""zsf command line: instance generation, solvers, conjecture runs and checking.

Reports go to stdout as key=value lines, led by the run configuration.
Logs go to stderr. Exit codes: 0 ok, 1 usage or input error and failed
verification, 2 unresolved factor search, 3 counterexample.
"""

from __future__ import annotations

import argparse
import os
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Literal

from loguru import logger
from pydantic import Field, ValidationError, field_validator

from zerosum_forests import conjlab, embed, factorsolve, graphcore, quadmin, starsolve, swapwalk
from zerosum_forests.errors import FormatError, InvalidEmbedding, NotAFactor, SpecError, Unresolved, ZeroSumError, format_error
from zerosum_forests.lib import set_logging
from zerosum_forests.schemas import BaseSchema

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_UNRESOLVED = 2
EXIT_COUNTEREXAMPLE = 3


def _env_jobs() -> int:
    try:
        return max(1, int(os.environ.get("ZSF_JOBS", "1")))
    except ValueError:
        return 1


class RunConfig(BaseSchema):
    """Everything a run depends on; echoed at the top of every report."""

    command: Literal["gen", "star", "walk", "factor", "lemma1", "conjecture", "verify"]
    n: int | None = Field(default=None, ge=1)
    seed: int = 0
    pattern: str | None = None
    k: int | None = None
    input: str | None = None
    output: str | None = None
    extremal: Literal["0mod4", "1mod4"] | None = None
    conjecture: Literal[1, 2] | None = None
    tree: str | None = None
    mode: Literal["exhaustive", "canonical", "sampled"] | None = None
    samples: int | None = Field(default=None, ge=0)
    include_extremal: bool = False
    resolution: int = Field(default=64, ge=1)
    factor_file: str | None = None
    embedding_file: str | None = None
    witness: str | None = None
    jobs: int = Field(default_factory=_env_jobs)

    @field_validator("jobs")
    @classmethod
    def _positive_jobs(cls, value: int) -> int:
        if value < 1:
            msg = "jobs must be at least 1"
            raise ValueError(msg)
        return value

    @field_validator("seed")
    @classmethod
    def _seed_64bit(cls, value: int) -> int:
        if not 0 <= value < 2**64:
            msg = "seed must fit in 64 unsigned bits"
            raise ValueError(msg)
        return value

    def header_lines(self) -> list[str]:
        fields = self.model_dump(exclude_none=True)
        return sorted(f"{key}={value}" for key, value in fields.items())


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="zsf", description="Zero-sum copies of spanning forests in ±1-labeled K_n")
    parser.add_argument("--quiet", action="store_true", help="disable logging")
    parser.add_argument("--jobs", type=int, default=None, help="worker processes (default: $ZSF_JOBS or 1)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a zero-sum labeling in ZSG format")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--extremal", choices=["0mod4", "1mod4"])
    p.add_argument("--out", dest="output", required=True)

    p = sub.add_parser("star", help="balanced spanning star")
    p.add_argument("--in", dest="input", required=True)

    p = sub.add_parser("walk", help="copy of a pattern with |weight| <= Δ+1")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--pattern", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", dest="output")

    p = sub.add_parser("factor", help="zero-sum P_k-factor")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--k", type=int, choices=[2, 3, 4], required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", dest="output")

    p = sub.add_parser("lemma1", help="certify the 5/256 quadratic bound")
    p.add_argument("--resolution", type=int, default=64)

    p = sub.add_parser("conjecture", help="desk check of a conjecture")
    p.add_argument("--id", dest="conjecture", type=int, choices=[1, 2], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--pattern", help="pattern spec for the (Δ−1)/2 check")
    p.add_argument("--tree", help="component of the T-factor check, e.g. P3 or S4")
    p.add_argument("--mode", choices=["exhaustive", "canonical", "sampled"])
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--include-extremal", action="store_true")
    p.add_argument("--witness", help="write the worst labeling here on a counterexample")

    p = sub.add_parser("verify", help="recheck a factor or embedding file against a labeling")
    p.add_argument("--in", dest="input", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--factor", dest="factor_file")
    group.add_argument("--embedding", dest="embedding_file")
    return parser


def _emit(config: RunConfig, lines: Sequence[str]) -> None:
    print("\n".join([*config.header_lines(), "", *lines]))


def _read(config: RunConfig) -> graphcore.EdgeLabeling:
    return graphcore.read(config.input or "")


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as err:
        msg = f"{path} is not UTF-8 text"
        raise FormatError(msg) from err


def _gen(config: RunConfig) -> int:
    n = config.n or 0
    if config.extremal == "0mod4":
        L = graphcore.construct_star_extremal_0mod4(n)
    elif config.extremal == "1mod4":
        L = graphcore.construct_star_extremal_1mod4(n)
    else:
        L = graphcore.random_zero_sum(n, config.seed)
    graphcore.write(L, config.output or "")
    _emit(config, [f"positive={L.positive_count}", f"total_weight={graphcore.total_weight(L)}"])
    return EXIT_OK


def _star(config: RunConfig) -> int:
    _emit(config, starsolve.balanced_center(_read(config)).report_lines())
    return EXIT_OK


def _walk(config: RunConfig) -> int:
    L = _read(config)
    F = embed.parse_pattern(config.pattern or "", L.n)
    copy = swapwalk.bounded_copy(L, F, seed=config.seed)
    if config.output:
        Path(config.output).write_text(embed.dumps_embedding(L, F, copy.embedding), encoding="utf-8")
    _emit(
        config,
        [
            f"weight={copy.weight}",
            f"bound={F.max_degree + 1}",
            f"plus_weight={copy.plus_weight}",
            f"minus_weight={copy.minus_weight}",
            f"steps={len(copy.trace)}",
            "map=" + " ".join(str(h) for h in copy.embedding.map),
        ],
    )
    return EXIT_OK


def _factor(config: RunConfig) -> int:
    L = _read(config)
    try:
        solution = factorsolve.solve_path_factor(L, config.k or 0, seed=config.seed)
    except Unresolved as err:
        _emit(config, ["status=unresolved", *err.report.report_lines()])
        return EXIT_UNRESOLVED
    text = factorsolve.dumps_factor(L, solution.factor)
    if config.output:
        Path(config.output).write_text(text, encoding="utf-8")
    _emit(config, [*text.rstrip("\n").split("\n"), f"stage={solution.stage}", f"moves={len(solution.moves)}"])
    return EXIT_OK


def _lemma1(config: RunConfig) -> int:
    certificate = quadmin.certify(config.resolution, jobs=config.jobs)
    _emit(config, certificate.report_lines())
    return EXIT_OK if certificate.certified else EXIT_ERROR


def _conjecture(config: RunConfig) -> int:
    n = config.n or 0
    if config.conjecture == 2:
        if not config.pattern:
            msg = "conjecture 2 needs --pattern"
            raise SpecError(msg)
        report = conjlab.check_conjecture2(
            n,
            config.pattern,
            mode=config.mode or "exhaustive",
            samples=config.samples if config.samples is not None else conjlab.SAMPLES,
            seed=config.seed,
            jobs=config.jobs,
            include_extremal=config.include_extremal,
        )
    else:
        if not config.tree:
            msg = "conjecture 1 needs --tree"
            raise SpecError(msg)
        report = conjlab.check_conjecture1(
            n,
            config.tree,
            samples=config.samples if config.samples is not None else conjlab.SAMPLES,
            seed=config.seed,
            jobs=config.jobs,
        )
    lines = report.report_lines(exclude={"witness"})
    if report.verdict == "COUNTEREXAMPLE" and config.witness and report.witness:
        Path(config.witness).write_text(report.witness, encoding="utf-8")
        lines.append(f"witness_file={config.witness}")
    _emit(config, lines)
    return EXIT_COUNTEREXAMPLE if report.verdict == "COUNTEREXAMPLE" else EXIT_OK


def _verify(config: RunConfig) -> int:
    L = _read(config)
    if config.factor_file:
        factor, declared = factorsolve.loads_factor(_read_text(config.factor_file))
        try:
            factor.validate(L.n)
        except NotAFactor as err:
            _emit(config, ["verdict=mismatch", f"reason={err}"])
            return EXIT_ERROR
        actual = factorsolve.factor_weight(L, factor)
    else:
        spec, declared, e = embed.loads_embedding(_read_text(config.embedding_file or ""))
        F = embed.parse_pattern(spec, L.n)
        try:
            embed.check_embedding(F, e, L.n)
        except InvalidEmbedding as err:
            _emit(config, ["verdict=mismatch", f"reason={err}"])
            return EXIT_ERROR
        actual = embed.weight(L, F, e)
    if actual != declared:
        _emit(config, ["verdict=mismatch", f"declared={declared}", f"weight={actual}"])
        return EXIT_ERROR
    _emit(config, ["verdict=ok", f"weight={actual}"])
    return EXIT_OK


_HANDLERS = {
    "gen": _gen,
    "star": _star,
    "walk": _walk,
    "factor": _factor,
    "lemma1": _lemma1,
    "conjecture": _conjecture,
    "verify": _verify,
}


def dispatch(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    set_logging(args.quiet)
    values = {key: value for key, value in vars(args).items() if value is not None and key != "quiet"}
    try:
        config = RunConfig(**values)
    except ValidationError as err:
        print(f"Input Error: {err.errors()[0]['msg']}", file=sys.stderr)
        return EXIT_ERROR
    try:
        return _HANDLERS[config.command](config)
    except (ZeroSumError, OSError) as err:
        logger.debug("{} failed: {!r}", config.command, err)
        print(format_error(err), file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
