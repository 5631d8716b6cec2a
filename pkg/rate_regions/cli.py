"""
Command-line front end.

Receiver sets are written as digit strings ("123"), braced lists for K > 9
("{1,2,10}") or with the overline escape ("~3" is [1:K] minus 3, "~" is
[1:K]). Exit codes: 0 success, 1 infeasible point, failed self-test or
non-containment, 2 usage error, 3 enumeration guard exceeded, 4 bad config.
"""

import argparse
import json
import logging
import sys
from typing import List, Optional, Sequence

from rate_regions import __version__
from rate_regions.api.projection import eliminate_variables, enumerate_vertices, project_by_fme, remove_redundant
from rate_regions.api.regions import EXPLICIT_REGIONS, build_general_region, build_nested_region, explicit_region
from rate_regions.api.selftest import run_acceptance_suite
from rate_regions.api.verify import (
    FeasibilityVerdict,
    achievable_polytope,
    capacity_polytope,
    check_rate_point,
    containment_witness,
)
from rate_regions.config import setup_logging
from rate_regions.models.assignments import NAMED_ASSIGNMENTS, named_assignment
from rate_regions.models.lattice import ReceiverSet
from rate_regions.models.messages import EXPANSION_KINDS, MessageSpec, expansion_for, split_top_level
from rate_regions.models.network import CombinationNetwork, instantiate
from rate_regions.models.polyhedra import NumericPolyhedron, SymbolicPolyhedron
from rate_regions.utils.config_loader import load_network, parse_message_set, parse_rate_point
from rate_regions.utils.errors import ConfigError, GuardExceededError, RateRegionError
from rate_regions.utils.formats import dump_numeric, dump_symbolic, read_matrix, to_json, vertices_csv

logger = logging.getLogger(__name__)

VERBS = ("region", "project", "capacity", "check", "compare", "vertices", "selftest")

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_GUARD = 3
EXIT_CONFIG = 4


class UsageError(RateRegionError, ValueError):
    """Missing or incompatible command-line inputs."""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rate_regions",
        description="Exact rate regions for two groupcast messages over combination networks",
        epilog="Receiver sets: digits (123), braces for K > 9 ({1,2,10}), ~S for [1:K] minus S, ~ for [1:K].",
    )
    parser.add_argument("verb", choices=VERBS, help="what to compute")
    parser.add_argument("--config", help="network config file, or the name of a bundled config")
    parser.add_argument("-K", "--receivers", type=int, help="number of receivers when no config is given")
    parser.add_argument("--messages", help='the two message sets, e.g. "1,123" or "~3,~"')
    parser.add_argument("--expansion", choices=EXPANSION_KINDS, default="P", help="message set expansion (default P)")
    parser.add_argument("--explicit", choices=sorted(EXPLICIT_REGIONS), help="use a closed-form region")
    parser.add_argument("--reduced", action="store_true", help="reduced private-receiver enumeration for nested messages")
    parser.add_argument("--assignment", choices=NAMED_ASSIGNMENTS, help="auxiliary component assignment")
    parser.add_argument("--point", help='message rates, e.g. "3/2,1"')
    parser.add_argument("--eliminate", help="variables to eliminate, separated by spaces or commas")
    parser.add_argument("--matrix", action="append", default=[], help="polyhedron in text matrix format (repeatable)")
    parser.add_argument("--format", choices=("text", "dump", "csv"), default="text", help="output format")
    parser.add_argument("--out", help="write the report to this file instead of stdout")
    parser.add_argument("--quick", action="store_true", help="small instance counts for selftest")
    parser.add_argument("--jobs", type=int, default=1, help="parallel workers for selftest batches")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug logging")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return parser


def _network(args) -> Optional[CombinationNetwork]:
    return load_network(args.config) if args.config else None


def _receivers(args, net: Optional[CombinationNetwork]) -> int:
    if net is not None:
        if args.receivers is not None and args.receivers != net.K:
            raise UsageError(f"-K {args.receivers} disagrees with the config's K={net.K}")
        return net.K
    if args.receivers is None:
        raise UsageError("give --config or -K")
    return args.receivers


def _spec(args, K: int) -> MessageSpec:
    if args.messages:
        return parse_message_set(args.messages, K)
    if args.explicit:
        region = explicit_region(args.explicit, K)
        first, second = (v.origin for v in region.message_variables)
        return MessageSpec(first, second, K)
    raise UsageError("give --messages or --explicit")


def _symbolic(args, K: int, reduced: bool = False) -> SymbolicPolyhedron:
    if args.explicit:
        return explicit_region(args.explicit, K)
    spec = _spec(args, K)
    F = expansion_for(spec, args.expansion)
    if spec.is_nested() and ReceiverSet.full(K) in spec.messages:
        return build_nested_region(spec, F, reduced=reduced or args.reduced)
    if args.reduced:
        raise UsageError("--reduced applies to nested messages with a message for every receiver")
    return build_general_region(spec, F)


def _assignment(args, net: CombinationNetwork):
    return named_assignment(args.assignment or "canonical", net, net.K)


def _emit(args, text: str):
    if args.out:
        with open(args.out, "w") as f:
            f.write(text)
        logger.info(f"wrote {args.out}")
    else:
        sys.stdout.write(text)


def _render(args, poly) -> str:
    if args.format == "dump":
        doc = dump_symbolic(poly) if isinstance(poly, SymbolicPolyhedron) else dump_numeric(poly)
        return to_json(doc)
    if args.format == "csv":
        if isinstance(poly, SymbolicPolyhedron):
            raise UsageError("csv output needs a numeric polyhedron; give --config")
        return vertices_csv([v.coordinates for v in enumerate_vertices(poly)], poly.variables)
    return poly.render()


def _read_matrices(paths: Sequence[str]) -> List[NumericPolyhedron]:
    result = []
    for path in paths:
        try:
            with open(path, "r") as f:
                result.append(read_matrix(f.read()))
        except OSError as e:
            raise UsageError(f"cannot read {path}: {e}")
    return result


def _numeric_source(args) -> NumericPolyhedron:
    """A matrix file, the projected region under an assignment, or the capacity polytope."""
    if args.matrix:
        return _read_matrices(args.matrix[:1])[0]
    net = _network(args)
    if net is None:
        raise UsageError("give --matrix or --config")
    K = _receivers(args, net)
    if args.assignment or args.explicit:
        return achievable_polytope(_symbolic(args, K, reduced=True), net, _assignment(args, net))
    return capacity_polytope(net, _spec(args, K))


def _cmd_region(args) -> int:
    net = _network(args)
    sym = _symbolic(args, _receivers(args, net))
    poly = instantiate(sym, net, _assignment(args, net)) if net is not None else sym
    _emit(args, _render(args, poly))
    return EXIT_OK


def _cmd_project(args) -> int:
    if args.matrix:
        poly = _read_matrices(args.matrix[:1])[0]
        if not args.eliminate:
            raise UsageError("projecting a matrix needs --eliminate")
    else:
        net = _network(args)
        sym = _symbolic(args, _receivers(args, net))
        poly = instantiate(sym, net, _assignment(args, net)) if net is not None else sym
    if args.eliminate:
        names = [n for part in split_top_level(args.eliminate) for n in part.split()]
        result = eliminate_variables(poly, names)
    else:
        result = project_by_fme(poly, [v.name for v in sym.message_variables])
    if isinstance(result, NumericPolyhedron):
        result = remove_redundant(result)
    _emit(args, _render(args, result))
    return EXIT_OK


def _cmd_capacity(args) -> int:
    net = _network(args)
    if net is None:
        raise UsageError("capacity needs --config")
    _emit(args, _render(args, capacity_polytope(net, _spec(args, _receivers(args, net)))))
    return EXIT_OK


def _verdict_doc(verdict: FeasibilityVerdict) -> dict:
    return {
        "feasible": verdict.feasible,
        "witness": {k: str(v) for k, v in (verdict.witness or {}).items()},
        "blocking_rows": verdict.blocking_rows,
        "blocking_labels": verdict.blocking_labels,
        "multipliers": {str(k): str(v) for k, v in verdict.multipliers.items()},
        "certificate": verdict.certificate.render(verdict.variables) if verdict.certificate else None,
    }


def _cmd_check(args) -> int:
    net = _network(args)
    if net is None or not args.point:
        raise UsageError("check needs --config and --point")
    K = _receivers(args, net)
    sym = _symbolic(args, K, reduced=True)
    spec = MessageSpec(*(v.origin for v in sym.message_variables), K)
    verdict = check_rate_point(sym, net, _assignment(args, net), parse_rate_point(args.point, spec))
    if args.format == "dump":
        _emit(args, json.dumps(_verdict_doc(verdict), indent=2) + "\n")
    else:
        _emit(args, verdict.render())
    return EXIT_OK if verdict.feasible else EXIT_NEGATIVE


def _cmd_compare(args) -> int:
    if len(args.matrix) >= 2:
        first, second = _read_matrices(args.matrix[:2])
    else:
        net = _network(args)
        if net is None:
            raise UsageError("compare needs two --matrix files or --config")
        K = _receivers(args, net)
        first = capacity_polytope(net, _spec(args, K))
        second = achievable_polytope(_symbolic(args, K, reduced=True), net, _assignment(args, net))
    outside = containment_witness(first, second)
    reverse = containment_witness(second, first)
    lines = [
        f"first contains second: {'yes' if outside is None else 'no'}",
        f"second contains first: {'yes' if reverse is None else 'no'}",
    ]
    if outside is not None:
        lines.append("second has vertex outside first: (" + ", ".join(str(c) for c in outside.coordinates) + ")")
    if reverse is not None:
        lines.append("first has vertex outside second: (" + ", ".join(str(c) for c in reverse.coordinates) + ")")
    lines.append("EQUAL" if outside is None and reverse is None else "NOT EQUAL")
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if outside is None else EXIT_NEGATIVE


def _cmd_vertices(args) -> int:
    poly = _numeric_source(args)
    vertices = [v.coordinates for v in enumerate_vertices(poly)]
    if args.format == "dump":
        doc = {"variables": list(poly.variables), "vertices": [[str(c) for c in v] for v in vertices]}
        _emit(args, json.dumps(doc, indent=2) + "\n")
    else:
        _emit(args, vertices_csv(vertices, poly.variables))
    return EXIT_OK


def _cmd_selftest(args) -> int:
    results = run_acceptance_suite(quick=args.quick, n_jobs=args.jobs)
    lines = [
        f"{'ok    ' if r.passed else 'FAILED'} {r.name} ({r.seconds:.1f}s) {r.detail}".rstrip()
        for r in results
    ]
    failed = sum(1 for r in results if not r.passed)
    lines.append(f"{len(results) - failed}/{len(results)} checks passed")
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if not failed else EXIT_NEGATIVE


COMMANDS = {
    "region": _cmd_region,
    "project": _cmd_project,
    "capacity": _cmd_capacity,
    "check": _cmd_check,
    "compare": _cmd_compare,
    "vertices": _cmd_vertices,
    "selftest": _cmd_selftest,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse arguments, dispatch the verb and map errors to exit codes.

    Args:
        argv: Arguments without the program name; defaults to sys.argv[1:]

    Returns:
        The exit code
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    setup_logging(args.verbose)
    try:
        return COMMANDS[args.verb](args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except GuardExceededError as e:
        print(f"guard exceeded: {e}", file=sys.stderr)
        return EXIT_GUARD
    except (RateRegionError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
