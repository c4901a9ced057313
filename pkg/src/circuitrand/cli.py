"""Command-line front end.

Subcommands: ``catalog`` (design generators), ``circuits`` (circuit bases),
``randomise`` (enumerate or check randomisation systems), ``tu`` (total
unimodularity) and ``analyse`` (exact estimates and diagnostics, or a Monte
Carlo A/B demonstration).

Matrices travel in the 4ti2 plain-text convention, a ``m n`` header line
followed by m rows of n integers, so circuit listings diff cleanly against
the output of 4ti2's ``circuits`` program.  Lines starting with ``#`` and
blank lines are ignored on input.  Run indices are 1-based in every file
and report (matching the usual block notation), 0-based inside the library.

Exit codes: 0 success, 2 unparseable input or invalid parameters, 3 model
precondition violated, 4 invalid randomisation system, 5 budget exceeded.
The environment variable CIRCUITRAND_THREADS (a positive integer) caps
internal parallelism; every computation in this build is sequential, so the
setting is validated but never changes any output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .analysis_sim import (
    covariance_comparison,
    lse_contrast_estimates,
    naive_block_bias,
    simulate_ab,
)
from .circuits import binary_circuits, circuit_basis, nonnegative_circuits
from .contrast import (
    ContrastModel,
    DesignModel,
    JNotInColumnSpaceError,
    to_contrast_form,
)
from .design_catalog import (
    NotBalancedError,
    OutOfBudgetError,
    anova_two_way,
    choice_k_of_2k,
    digraph_design,
    factorial_two_level,
)
from .exact_linalg import IntMatrix
from .randomisation import RandomisationSystem, enumerate_circuit_randomisations
from .unimodular import (
    DEFAULT_SIZE_CAP,
    DirectedGraph,
    TooLargeError,
    is_totally_unimodular,
)

EXIT_OK = 0
EXIT_PARAMS = 2
EXIT_PRECONDITION = 3
EXIT_INVALID_SYSTEM = 4
EXIT_BUDGET = 5


class CliError(Exception):
    """Carries an exit code and a diagnostic for the error path."""

    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _strip_comments(text: str) -> list[str]:
    return [
        line
        for line in text.splitlines()
        if line.strip() and not line.lstrip().startswith("#")
    ]


def parse_matrix_text(text: str) -> IntMatrix:
    """Parse the ``m n`` header plus entries format; comments are skipped."""
    lines = _strip_comments(text)
    if not lines:
        raise ValueError("empty matrix file")
    header = lines[0].split()
    if len(header) != 2:
        raise ValueError(f"matrix header must be 'm n', got {lines[0]!r}")
    try:
        n_rows, n_cols = int(header[0]), int(header[1])
    except ValueError:
        raise ValueError(f"matrix header must be 'm n', got {lines[0]!r}") from None
    if n_rows < 0 or n_cols < 0:
        raise ValueError("matrix dimensions cannot be negative")
    tokens = [tok for line in lines[1:] for tok in line.split()]
    if len(tokens) != n_rows * n_cols:
        raise ValueError(
            f"expected {n_rows * n_cols} entries for a {n_rows}x{n_cols} matrix, got {len(tokens)}"
        )
    try:
        values = [int(tok) for tok in tokens]
    except ValueError as exc:
        raise ValueError(f"matrix entries must be integers: {exc}") from None
    rows = [
        tuple(values[i * n_cols : (i + 1) * n_cols]) for i in range(n_rows)
    ]
    return IntMatrix.from_rows(rows, n_cols=n_cols)


def format_matrix_text(matrix: IntMatrix) -> str:
    lines = [f"{matrix.n_rows} {matrix.n_cols}"]
    lines.extend(" ".join(str(x) for x in row) for row in matrix.rows)
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class MatrixFile:
    """A matrix stored in the plain-text interchange format."""

    path: str

    def read(self) -> IntMatrix:
        return parse_matrix_text(Path(self.path).read_text())

    def write(self, matrix: IntMatrix) -> None:
        Path(self.path).write_text(format_matrix_text(matrix))


def parse_blocks_text(text: str) -> list[tuple[int, ...]]:
    """One block per line, 1-based run indices; returned 0-based."""
    blocks = []
    for line in _strip_comments(text):
        try:
            indices = [int(tok) for tok in line.split()]
        except ValueError:
            raise ValueError(f"block line must hold integers: {line!r}") from None
        if any(i < 1 for i in indices):
            raise ValueError("run indices are 1-based and must be positive")
        blocks.append(tuple(i - 1 for i in indices))
    if not blocks:
        raise ValueError("empty blocks file")
    return blocks


def format_blocks_text(system: RandomisationSystem) -> str:
    return "\n".join(" ".join(str(i + 1) for i in b) for b in system.blocks) + "\n"


def parse_edges_text(text: str) -> DirectedGraph:
    """One 'tail head' pair per line, 1-based vertex numbers."""
    edges = []
    for line in _strip_comments(text):
        toks = line.split()
        if len(toks) != 2:
            raise ValueError(f"edge line must be 'tail head', got {line!r}")
        try:
            t, h = int(toks[0]), int(toks[1])
        except ValueError:
            raise ValueError(f"edge line must hold integers: {line!r}") from None
        if t < 1 or h < 1:
            raise ValueError("vertex numbers are 1-based and must be positive")
        edges.append((t - 1, h - 1))
    return DirectedGraph.from_edges(edges)


def parse_rational_list(text: str) -> list[Fraction]:
    """Whitespace-separated rationals; accepts '3', '1/2' and '0.25'."""
    values = []
    for tok in (t for line in _strip_comments(text) for t in line.split()):
        try:
            values.append(Fraction(tok))
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"cannot parse rational number {tok!r}") from None
    return values


def _read_file(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CliError(EXIT_PARAMS, f"cannot read {path}: {exc}") from exc


def _read_matrix(path: str) -> IntMatrix:
    try:
        return parse_matrix_text(_read_file(path))
    except ValueError as exc:
        raise CliError(EXIT_PARAMS, f"{path}: {exc}") from exc


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise CliError(EXIT_PARAMS, message)


def _contrast_model(matrix: IntMatrix, path: str) -> ContrastModel:
    design = _design_from_matrix(matrix)
    try:
        return to_contrast_form(design)
    except JNotInColumnSpaceError as exc:
        raise CliError(EXIT_PRECONDITION, f"{path}: {exc}") from exc


def _design_from_matrix(matrix: IntMatrix) -> DesignModel:
    return DesignModel(
        matrix=matrix,
        run_labels=tuple(str(i + 1) for i in range(matrix.n_rows)),
        param_labels=tuple(f"p{j + 1}" for j in range(matrix.n_cols)),
    )


def _emit(args: argparse.Namespace, human_lines: list[str], records: dict) -> None:
    if args.format == "records":
        print(json.dumps(records, indent=2))
    else:
        for line in human_lines:
            print(line)


def _format_block(block: tuple[int, ...]) -> str:
    return "{" + ",".join(str(i + 1) for i in block) + "}"


def _format_fractions(values: Sequence[Fraction]) -> str:
    return "(" + ", ".join(str(v) for v in values) + ")"


def cmd_catalog(args: argparse.Namespace) -> int:
    if args.family == "digraph":
        graph = _parse_edges_arg(args.edges)
        try:
            design = digraph_design(graph)
        except NotBalancedError as exc:
            raise CliError(EXIT_PRECONDITION, str(exc)) from exc
    else:
        try:
            if args.family == "factorial":
                _require(args.k is not None, "the factorial family needs --k")
                design = factorial_two_level(args.k)
            elif args.family == "anova2":
                _require(
                    args.I is not None and args.J is not None,
                    "the anova2 family needs --I and --J",
                )
                design = anova_two_way(args.I, args.J)
            else:
                _require(args.k is not None, "the choice family needs --k")
                design = choice_k_of_2k(args.k)
        except (OutOfBudgetError, ValueError) as exc:
            raise CliError(EXIT_PARAMS, str(exc)) from exc

    text = format_matrix_text(design.matrix)
    comments = [f"# run {i + 1}: {label}" for i, label in enumerate(design.run_labels)]
    comments += [
        f"# param {j + 1}: {label}" for j, label in enumerate(design.param_labels)
    ]
    body = text + "\n".join(comments) + "\n"
    if args.output:
        Path(args.output).write_text(body)
        return EXIT_OK
    _emit(
        args,
        body.rstrip("\n").split("\n"),
        {
            "n_rows": design.matrix.n_rows,
            "n_cols": design.matrix.n_cols,
            "rows": [list(row) for row in design.matrix.rows],
            "run_labels": list(design.run_labels),
            "param_labels": list(design.param_labels),
        },
    )
    return EXIT_OK


def _parse_edges_arg(path: str | None) -> DirectedGraph:
    if not path:
        raise CliError(EXIT_PARAMS, "the digraph family needs --edges FILE")
    try:
        return parse_edges_text(_read_file(path))
    except ValueError as exc:
        raise CliError(EXIT_PARAMS, f"{path}: {exc}") from exc


def cmd_circuits(args: argparse.Namespace) -> int:
    matrix = _read_matrix(args.input)
    if args.transpose:
        matrix = matrix.transpose()
    basis = circuit_basis(matrix)
    summary = f"circuits={len(basis)}"
    records: dict = {"circuits": len(basis)}
    listed = list(basis.circuits)
    if args.nonnegative or args.binary:
        nonneg = nonnegative_circuits(basis)
        summary += f" nonnegative={len(nonneg)}"
        records["nonnegative"] = len(nonneg)
        listed = nonneg
    if args.binary:
        binary = binary_circuits(basis)
        summary += f" binary={len(binary)}"
        records["binary"] = len(binary)
        listed = binary
    lines = [" ".join(str(x) for x in c.vector) for c in listed]
    records["vectors"] = [list(c.vector) for c in listed]
    _emit(args, lines + [summary], records)
    return EXIT_OK


def cmd_randomise(args: argparse.Namespace) -> int:
    matrix = _read_matrix(args.input)
    model = _contrast_model(matrix, args.input)
    if args.check:
        return _randomise_check(args, model)

    catalog = enumerate_circuit_randomisations(model, include_full=args.include_full)
    lines = [f"systems={len(catalog)}"]
    lines += [" ".join(_format_block(b) for b in s.blocks) for s in catalog.systems]
    records: dict = {
        "systems": [[[i + 1 for i in b] for b in s.blocks] for s in catalog.systems]
    }
    if args.shapes:
        lines.append("shapes:")
        lines += [
            "+".join(str(x) for x in shape) + f" {count}"
            for shape, count in catalog.shape_counts.items()
        ]
        records["shapes"] = [
            [list(shape), count] for shape, count in catalog.shape_counts.items()
        ]
    if args.lattice:
        lines.append(f"lattice-edges={len(catalog.refinement_edges)}")
        lines += [
            f"{coarser + 1} covers {finer + 1}"
            for coarser, finer in catalog.refinement_edges
        ]
        records["lattice_edges"] = [
            [coarser + 1, finer + 1] for coarser, finer in catalog.refinement_edges
        ]
    _emit(args, lines, records)
    return EXIT_OK


def _randomise_check(args: argparse.Namespace, model: ContrastModel) -> int:
    try:
        blocks = parse_blocks_text(_read_file(args.check))
    except ValueError as exc:
        raise CliError(EXIT_PARAMS, f"{args.check}: {exc}") from exc
    try:
        system = RandomisationSystem.from_blocks(model.n_runs, blocks)
    except ValueError as exc:
        raise CliError(EXIT_INVALID_SYSTEM, f"invalid system: {exc}") from exc
    for block in system.blocks:
        for j in range(model.contrast.n_cols):
            product = sum(model.contrast.column(j)[i] for i in block)
            if product != 0:
                raise CliError(
                    EXIT_INVALID_SYSTEM,
                    f"invalid system: block {_format_block(block)} has inner "
                    f"product {product} with contrast column {j + 1}",
                )
    _emit(args, ["valid"], {"valid": True})
    return EXIT_OK


def cmd_tu(args: argparse.Namespace) -> int:
    matrix = _read_matrix(args.input)
    try:
        verdict = is_totally_unimodular(matrix, size_cap=args.cap)
    except TooLargeError as exc:
        raise CliError(EXIT_BUDGET, f"budget exceeded: {exc}") from exc
    answer = "yes" if verdict else "no"
    _emit(args, [f"totally unimodular: {answer}"], {"totally_unimodular": verdict})
    return EXIT_OK


def cmd_analyse(args: argparse.Namespace) -> int:
    if args.simulate:
        return _analyse_simulate(args)
    if not args.input or not args.system or not args.y or args.gamma is None:
        raise CliError(
            EXIT_PARAMS,
            "analyse needs DESIGN --system FILE --y FILE --gamma FILE, or --simulate",
        )
    matrix = _read_matrix(args.input)
    model = _contrast_model(matrix, args.input)
    try:
        blocks = parse_blocks_text(_read_file(args.system))
    except ValueError as exc:
        raise CliError(EXIT_PARAMS, f"{args.system}: {exc}") from exc
    _validate_blocks(blocks, model.n_runs)
    try:
        y = parse_rational_list(_read_file(args.y))
        gamma = parse_rational_list(_read_file(args.gamma))
    except ValueError as exc:
        raise CliError(EXIT_PARAMS, str(exc)) from exc
    if len(y) != model.n_runs:
        raise CliError(
            EXIT_PARAMS, f"need {model.n_runs} responses, got {len(y)}"
        )
    if len(gamma) != len(blocks):
        raise CliError(
            EXIT_PARAMS, f"need {len(blocks)} block effects, got {len(gamma)}"
        )
    z = IntMatrix.from_rows(
        (
            tuple(int(run in set(b)) for b in blocks)
            for run in range(model.n_runs)
        ),
        n_cols=len(blocks),
    )
    estimates = lse_contrast_estimates(model, y)
    shift = z.to_rational().mul_vector(gamma)
    shifted = [a + b for a, b in zip(y, shift)]
    invariant = estimates == lse_contrast_estimates(model, shifted)
    bias = naive_block_bias(model, z, gamma)
    ordering = covariance_comparison(model, z)
    _emit(
        args,
        [
            f"estimates: {_format_fractions(estimates)}",
            f"bias: {_format_fractions(bias)}",
            f"invariance: {'exact' if invariant else 'violated'}",
            f"covariance: {ordering.value}",
        ],
        {
            "estimates": [str(v) for v in estimates],
            "bias": [str(v) for v in bias],
            "invariance": "exact" if invariant else "violated",
            "covariance": ordering.value,
        },
    )
    return EXIT_OK


def _validate_blocks(blocks: list[tuple[int, ...]], n_runs: int) -> None:
    seen: set[int] = set()
    for b in blocks:
        if len(b) < 2:
            raise CliError(EXIT_INVALID_SYSTEM, "invalid system: blocks need at least two runs")
        if len(set(b)) != len(b):
            raise CliError(EXIT_INVALID_SYSTEM, "invalid system: repeated run inside a block")
        if any(i >= n_runs for i in b):
            raise CliError(EXIT_INVALID_SYSTEM, f"invalid system: run index beyond {n_runs}")
        if seen & set(b):
            raise CliError(EXIT_INVALID_SYSTEM, "invalid system: blocks overlap")
        seen.update(b)


def _analyse_simulate(args: argparse.Namespace) -> int:
    if args.n1 is None or args.n2 is None:
        raise CliError(EXIT_PARAMS, "--simulate needs --n1 and --n2")
    try:
        summary = simulate_ab(
            n1=args.n1,
            n2=args.n2,
            theta=(args.theta1, args.theta2),
            confounder_sd=args.sd,
            replications=args.replications,
            seed=args.seed,
        )
    except ValueError as exc:
        raise CliError(EXIT_PARAMS, str(exc)) from exc
    header = (
        f"simulate: n1={summary.n1} n2={summary.n2} "
        f"theta1={summary.theta[0]!r} theta2={summary.theta[1]!r} "
        f"sd={summary.confounder_sd!r} replications={summary.replications} "
        f"seed={summary.seed}"
    )
    _emit(
        args,
        [header, f"mean={summary.mean!r}", f"se={summary.standard_error!r}"],
        {
            "n1": summary.n1,
            "n2": summary.n2,
            "theta1": summary.theta[0],
            "theta2": summary.theta[1],
            "sd": summary.confounder_sd,
            "replications": summary.replications,
            "seed": summary.seed,
            "mean": summary.mean,
            "se": summary.standard_error,
        },
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format",
        choices=("human", "records"),
        default="human",
        help="human-readable report or JSON records with the same numbers",
    )

    parser = argparse.ArgumentParser(
        prog="circuitrand",
        description="Circuit bases and valid randomisation systems, exactly.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_cat = sub.add_parser("catalog", parents=[common], help="generate a catalog design")
    p_cat.add_argument("family", choices=("factorial", "anova2", "choice", "digraph"))
    p_cat.add_argument("--k", type=int, help="factor count (factorial) or k (choice)")
    p_cat.add_argument("--I", type=int, help="row levels (anova2)")
    p_cat.add_argument("--J", type=int, help="column levels (anova2)")
    p_cat.add_argument("--edges", help="edge list file (digraph family)")
    p_cat.add_argument("-o", "--output", help="write the matrix file here instead of stdout")
    p_cat.set_defaults(func=cmd_catalog)

    p_cir = sub.add_parser("circuits", parents=[common], help="compute a circuit basis")
    p_cir.add_argument("input", help="matrix file")
    p_cir.add_argument("--nonnegative", action="store_true", help="list nonnegative circuits only")
    p_cir.add_argument("--binary", action="store_true", help="list binary circuits only")
    p_cir.add_argument("--transpose", action="store_true", help="use the transposed matrix")
    p_cir.set_defaults(func=cmd_circuits)

    p_ran = sub.add_parser(
        "randomise", parents=[common], help="enumerate or check randomisation systems"
    )
    p_ran.add_argument("input", help="design matrix file")
    mode = p_ran.add_mutually_exclusive_group(required=True)
    mode.add_argument("--enumerate", action="store_true", help="list all circuit-based systems")
    mode.add_argument("--check", metavar="FILE", help="validate the partition in FILE")
    p_ran.add_argument(
        "--include-full", action="store_true", help="include the single-block full randomisation"
    )
    p_ran.add_argument("--shapes", action="store_true", help="print the block-shape count table")
    p_ran.add_argument("--lattice", action="store_true", help="print refinement covering edges")
    p_ran.set_defaults(func=cmd_randomise)

    p_tu = sub.add_parser("tu", parents=[common], help="test total unimodularity")
    p_tu.add_argument("input", help="matrix file")
    p_tu.add_argument(
        "--cap",
        type=int,
        default=DEFAULT_SIZE_CAP,
        help="largest number of square submatrices to test",
    )
    p_tu.set_defaults(func=cmd_tu)

    p_ana = sub.add_parser(
        "analyse", parents=[common], help="exact estimates and block diagnostics"
    )
    p_ana.add_argument("input", nargs="?", help="design matrix file")
    p_ana.add_argument("--system", metavar="FILE", help="blocks file, one block per line")
    p_ana.add_argument("--y", metavar="FILE", help="response vector file")
    p_ana.add_argument("--gamma", metavar="FILE", help="block effect vector file")
    p_ana.add_argument("--simulate", action="store_true", help="run the A/B Monte Carlo instead")
    p_ana.add_argument("--n1", type=int, help="group A size (--simulate)")
    p_ana.add_argument("--n2", type=int, help="group B size (--simulate)")
    p_ana.add_argument("--theta1", type=float, default=0.0, help="group A mean (--simulate)")
    p_ana.add_argument("--theta2", type=float, default=0.0, help="group B mean (--simulate)")
    p_ana.add_argument("--sd", type=float, default=1.0, help="confounder sd (--simulate)")
    p_ana.add_argument("--replications", type=int, default=1000, help="replication count")
    p_ana.add_argument("--seed", type=int, default=0, help="RNG seed (--simulate)")
    p_ana.set_defaults(func=cmd_analyse)

    return parser


def _check_thread_env() -> None:
    raw = os.environ.get("CIRCUITRAND_THREADS")
    if raw is None:
        return
    try:
        value = int(raw)
    except ValueError:
        raise CliError(
            EXIT_PARAMS, f"CIRCUITRAND_THREADS must be a positive integer, got {raw!r}"
        ) from None
    if value < 1:
        raise CliError(
            EXIT_PARAMS, f"CIRCUITRAND_THREADS must be a positive integer, got {raw!r}"
        )


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _check_thread_env()
        return args.func(args)
    except CliError as exc:
        print(f"circuitrand: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
