"""Command line front end.

Exit codes: 0 success, 1 usage or input error, 2 declined (or, for
``verify``, no majority polymorphism), 3 oracle budget exceeded.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__
from .core import BOTTOM, SolutionSet, Status, pairwise_to_general
from .dbest import argmind
from .fileio import (
    Names,
    ParseError,
    format_weight,
    parse_dissimilarity,
    parse_operator,
    parse_problem_with_names,
    serialize_operator,
    serialize_problem,
    serialize_solution,
    serialize_witness,
)
from .generate import FAMILIES, InstanceGenSpec, generate_instance
from .oracle import DEFAULT_BUDGET, BudgetExceeded, find_majority_polymorphism, is_polymorphism, median_operator
from .reduce import reduce_order
from .reductions import (
    LabelCountConstraint,
    clustering_to_problem,
    filter_dbest,
    labeling_to_partition,
)
from .solver import SolverConfig, solve

EXIT_OK, EXIT_USAGE, EXIT_DECLINED, EXIT_BUDGET = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class UsageError(Exception):
    pass


def _read(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(data: bytes) -> None:
    sys.stdout.buffer.write(data)
    sys.stdout.flush()


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return v


def _object_id(token: str, names: Names, n: int) -> int:
    if names.objects and token in names.objects:
        return names.objects.index(token)
    try:
        v = int(token)
    except ValueError:
        raise UsageError(f"unknown object {token!r}") from None
    if not 0 <= v < n:
        raise UsageError(f"object id {v} out of range")
    return v


def _label_id(token: str, names: Names, k: int) -> int:
    if names.labels and token in names.labels:
        return names.labels.index(token)
    try:
        v = int(token)
    except ValueError:
        raise UsageError(f"unknown label {token!r}") from None
    if not 0 <= v < k:
        raise UsageError(f"label id {v} out of range")
    return v


def _parse_filter(text: str, names: Names, k: int) -> LabelCountConstraint:
    label, sep, count = text.rpartition(":")
    if not sep:
        raise UsageError("--filter expects LABEL:COUNT")
    try:
        n = int(count)
    except ValueError:
        raise UsageError("--filter count must be an integer") from None
    if n < 0:
        raise UsageError("--filter count must not be negative")
    return LabelCountConstraint(_label_id(label, names, k), n)


# ---------------------------------------------------------------------------
# subcommands


def cmd_solve(args) -> int:
    problem, names = parse_problem_with_names(_read(args.problem))
    n, k = problem.num_objects, problem.num_labels
    pred = _parse_filter(args.filter, names, k) if args.filter else None
    order = None
    if args.order:
        order = [_object_id(t.strip(), names, n) for t in args.order.split(",")]
        if sorted(order) != list(range(n)):
            raise UsageError("--order must list every object exactly once")

    if n == 1:
        # no pairs to reduce to: rank the labels directly
        unary = np.full(k, BOTTOM)
        for t in problem.tables:
            unary = np.maximum(unary, t.values)
        best = argmind([((x,), float(unary[x])) for x in range(k)], args.dbest)
        sol = SolutionSet(Status.ACCEPTED, min(args.dbest, k), tuple((b.payload, b.value) for b in best))
    else:
        outcome = reduce_order(problem)
        if outcome.declined:
            w = outcome.witness
            print(
                f"declined: scope {w.scope_index} ({' '.join(names.object(i) for i in w.scope)}) is not "
                f"the max of its pair projections at labeling {' '.join(names.label(v) for v in w.labeling)}",
                file=sys.stderr,
            )
            _write(serialize_witness(w, names))
            return EXIT_DECLINED
        config = SolverConfig(
            d=args.dbest, use_equivalent_transform=args.mode == "algorithm4", elimination_order=order
        )
        sol = solve(outcome.pairwise, config)

    if not sol.accepted:
        dc = sol.decline
        print(
            f"declined: eliminating object {names.object(dc.pivot)} is unsafe for labeling "
            f"{' '.join(names.label(v) for v in dc.labeling)} of objects "
            f"{' '.join(names.object(i) for i in dc.objects)} "
            f"(value {format_weight(dc.restricted_value)} < extension cost {format_weight(dc.extension_cost)})",
            file=sys.stderr,
        )
        _write(serialize_solution(sol, names, args.format))
        return EXIT_DECLINED

    extra = None
    if pred is not None:
        hit = filter_dbest(sol, pred)
        extra = {"filter": args.filter}
        if hit.certified:
            extra["filter_rank"] = hit.rank
            extra["filter_objective"] = format_weight(hit.value)
            extra["filter_labeling"] = [names.label(v) for v in hit.labeling]
        else:
            extra["filter_rank"] = "none"
    _write(serialize_solution(sol, names, args.format, extra))
    return EXIT_OK


def cmd_reduce(args) -> int:
    problem, names = parse_problem_with_names(_read(args.problem))
    if problem.num_objects == 1:
        raise UsageError("single-object problems have no pairwise form")
    outcome = reduce_order(problem)
    if outcome.declined:
        print(f"declined: scope {outcome.witness.scope_index} has no pairwise decomposition", file=sys.stderr)
        _write(serialize_witness(outcome.witness, names))
        return EXIT_DECLINED
    _write(serialize_problem(pairwise_to_general(outcome.pairwise), names))
    return EXIT_OK


def cmd_verify(args) -> int:
    problem, _ = parse_problem_with_names(_read(args.problem))
    budget = args.budget
    if args.operator:
        op = parse_operator(_read(args.operator))
        if (op.num_objects, op.num_labels) != (problem.num_objects, problem.num_labels):
            raise UsageError("operator dimensions do not match the problem")
        if not op.is_majority():
            raise UsageError("operator violates the majority identities")
        if is_polymorphism(problem, op, budget):
            _write(b"majority polymorphism: verified (given operator)\n")
            return EXIT_OK
        _write(b"majority polymorphism: given operator is not a polymorphism\n")
        return EXIT_DECLINED

    op = find_majority_polymorphism(problem, budget)
    if op is None:
        _write(b"majority polymorphism: none\n")
        return EXIT_DECLINED
    how = "median" if op == median_operator(problem.num_objects, problem.num_labels) else "search"
    _write(f"majority polymorphism: found ({how})\n".encode())
    if args.operator_out:
        with open(args.operator_out, "wb") as fh:
            fh.write(serialize_operator(op))
    return EXIT_OK


def cmd_generate(args) -> int:
    try:
        spec = InstanceGenSpec(
            seed=args.seed,
            num_objects=args.objects,
            num_labels=args.labels,
            family=args.family,
            order=args.order,
            count=args.count,
            lo=args.lo,
            hi=args.hi,
            p_bottom=args.p_bottom,
            p_top=args.p_top,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _write(serialize_problem(generate_instance(spec)))
    return EXIT_OK


def cmd_cluster(args) -> int:
    m = parse_dissimilarity(_read(args.matrix))
    if m.n == 1:
        sol = SolutionSet(Status.ACCEPTED, 1, (((0,), BOTTOM),))
    else:
        sol = solve(clustering_to_problem(m), SolverConfig(d=args.dbest))
    lines = [f"status {sol.status.value}", f"d {sol.d}"]
    for rank, (x, w) in enumerate(sol.labellings, start=1):
        first, second = labeling_to_partition(x)
        lines.append(
            f"{rank} {format_weight(w)} {{{' '.join(map(str, sorted(first)))}}} "
            f"{{{' '.join(map(str, sorted(second)))}}}"
        )
    _write(("\n".join(lines) + "\n").encode())
    return EXIT_OK if sol.accepted else EXIT_DECLINED


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="minimax-labeling", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="d best labellings of a problem file")
    p.add_argument("problem", help="problem file, '-' for stdin")
    p.add_argument("-d", "--dbest", type=_positive, default=1)
    p.add_argument("--mode", choices=("algorithm4", "greedy"), default="algorithm4")
    p.add_argument("--order", help="comma separated object ids or names; the last is eliminated first")
    p.add_argument("--filter", metavar="LABEL:COUNT", help="report the first labeling using LABEL at most COUNT times")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("reduce", help="rewrite a problem as an equivalent pairwise problem")
    p.add_argument("problem")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("verify", help="look for (or check) a majority polymorphism by enumeration")
    p.add_argument("problem")
    p.add_argument("--operator", help="operator file to check instead of searching")
    p.add_argument("--operator-out", help="write the operator found to this file")
    p.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("generate", help="write a deterministic random problem file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--family", choices=FAMILIES, default="pairwise-complete")
    p.add_argument("--objects", type=_positive, default=4)
    p.add_argument("--labels", type=_positive, default=2)
    p.add_argument("--order", type=_positive, default=3, help="scope size for random-scopes")
    p.add_argument("--count", type=_positive, default=4, help="number of scopes for random-scopes")
    p.add_argument("--lo", type=int, default=0)
    p.add_argument("--hi", type=int, default=9)
    p.add_argument("--p-bottom", type=float, default=0.0)
    p.add_argument("--p-top", type=float, default=0.0)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("cluster", help="best two-way min-max partitions of a dissimilarity file")
    p.add_argument("matrix")
    p.add_argument("-d", "--dbest", type=_positive, default=1)
    p.set_defaults(func=cmd_cluster)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ParseError, UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
