"""Command line front end.

Exit codes: 0 success, 1 axiom or property failure, 2 input error.  The
default seed comes from the GRAEVNORM_SEED environment variable.  With
--json every command prints one canonical machine-readable object, byte
identical for identical inputs and seed.
"""

from __future__ import annotations

import argparse
import inspect
import json
import os
import sys

from . import checks
from .extend import EmbeddingInstance, NotEmbedded, NotQuasiUniform, extend_qpm
from .formats import (
    ParseError,
    embedding_from_dict,
    group_from_dict,
    load_json,
    parse_abelian,
    parse_group_word,
    space_from_dict,
    topology_from_dict,
)
from .graev import abelian_norm_oracle, norm_dp_result, norm_oracle
from .quniform import InvalidTopology
from .qpspace import NegativeEntry, NonzeroDiagonal, TriangleViolation, UnboundedInput


def _dump(data: dict) -> None:
    print(json.dumps(data, sort_keys=True, separators=(",", ":")))


def _default_seed() -> int:
    return int(os.environ.get("GRAEVNORM_SEED", "0"))


def _validate_group(table, subsets) -> None:
    order = len(table)
    for row in table:
        if any(v < 0 or v >= order for v in row):
            raise ParseError("table entry outside the group")
    if not any(
        all(table[e][x] == x and table[x][e] == x for x in range(order))
        for e in range(order)
    ):
        raise ParseError("table has no identity element")
    for s in subsets:
        if any(v < 0 or v >= order for v in s):
            raise ParseError("subset member outside the group")


def cmd_validate(args) -> int:
    try:
        data = load_json(args.path)
        if "matrix" in data:
            space = space_from_dict(data)
            kind, size = "space", space.size
        elif "opens" in data or "min_nbhd" in data:
            topo = topology_from_dict(data)
            kind, size = "topology", topo.size
        elif "space" in data and "subspace" in data:
            embedding_from_dict(data)
            kind, size = "embedding", len(data["subspace"])
        elif "table" in data:
            table, subsets = group_from_dict(data)
            _validate_group(table, subsets)
            kind, size = "group", len(table)
        else:
            raise ParseError("unrecognized file contents")
    except (NegativeEntry, NonzeroDiagonal, TriangleViolation, InvalidTopology) as exc:
        if args.json:
            _dump({"valid": False, "error": str(exc)})
        else:
            print(f"invalid: {exc}")
        return 1
    except (ParseError, ValueError) as exc:
        if args.json:
            _dump({"valid": False, "error": str(exc)})
        else:
            print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.json:
        _dump({"valid": True, "kind": kind, "points": size})
    else:
        print(f"valid {kind} with {size} points")
    return 0


def cmd_norm(args) -> int:
    try:
        space = space_from_dict(load_json(args.space))
        if args.abelian:
            h = parse_abelian(args.word, space.labels)
            result = abelian_norm_oracle(h, space)
        elif args.oracle or args.widen:
            g = parse_group_word(args.word, space.labels)
            result = norm_oracle(g, space, widen=args.widen)
        else:
            g = parse_group_word(args.word, space.labels)
            result = norm_dp_result(g, space)
    except (ParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    witness_word = result.witness_word.tokens(space.labels)
    witness_pairs = [list(p) for p in result.witness_scheme.pairs]
    if args.json:
        _dump(
            {
                "value": str(result.value),
                "witness_word": witness_word,
                "witness_scheme": witness_pairs,
            }
        )
    else:
        print(result.value)
        print(f"witness word:   {witness_word or 'e'}")
        print(f"witness scheme: {witness_pairs}")
    return 0


_SUITE_PARAMS = {
    "trials",
    "instances",
    "points",
    "max_points",
    "max_x",
    "max_len",
    "max_n",
    "max_depth",
    "max_cyclic",
    "max_abelian",
    "conj_len",
    "small",
    "general",
    "trial_points",
    "trial_len",
}


def cmd_check(args) -> int:
    name = args.suite
    if name not in checks.SUITES:
        print(
            f"error: unknown suite {name!r}; known: {', '.join(sorted(checks.SUITES))}",
            file=sys.stderr,
        )
        return 2
    accepted = set(inspect.signature(checks.SUITES[name]).parameters)
    params = {
        key: getattr(args, key)
        for key in _SUITE_PARAMS
        if getattr(args, key, None) is not None and key in accepted
    }
    report = checks.run_suite(name, args.seed, **params)
    if args.json:
        _dump(report.to_dict())
    else:
        status = "PASS" if report.passed else "FAIL"
        print(f"{report.suite}: {status} ({report.cases} cases, seed {report.seed})")
        for failure in report.failures[:10]:
            print(f"  counterexample: {json.dumps(failure, sort_keys=True)}")
    return 0 if report.passed else 1


def cmd_extend(args) -> int:
    try:
        space, subset, d, subset_space = embedding_from_dict(load_json(args.path))
        inst = EmbeddingInstance(space, subset, d, subset_space)
        result = extend_qpm(inst)
    except NotEmbedded as exc:
        if args.json:
            _dump({"extended": False, "pair": list(exc.pair), "error": str(exc)})
        else:
            print(f"not embedded at pair {exc.pair}: {exc}")
        return 1
    except (ParseError, NotQuasiUniform, UnboundedInput, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    matrix = [[str(v) for v in row] for row in result.extended.rows]
    if args.json:
        _dump(
            {
                "extended": True,
                "points": result.extended.labels,
                "matrix": matrix,
                "depth": result.depth,
            }
        )
    else:
        width = max(len(v) for row in matrix for v in row)
        print("  ".join(label.rjust(width) for label in result.extended.labels))
        for row in matrix:
            print("  ".join(v.rjust(width) for v in row))
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="graevnorm",
        description="Exact Graev quasi-prenorms over finite quasi-pseudometric spaces",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="validate a space/topology/embedding file")
    p_validate.add_argument("path")
    p_validate.add_argument("--json", action="store_true")
    p_validate.set_defaults(func=cmd_validate)

    p_norm = sub.add_parser("norm", help="norm of a word with witness")
    p_norm.add_argument("space")
    p_norm.add_argument("word", help="tokens like 'a b^-1 e', or a coefficient map with --abelian")
    p_norm.add_argument("--abelian", action="store_true")
    p_norm.add_argument("--oracle", action="store_true", help="force brute force")
    p_norm.add_argument("--widen", type=int, default=0, help="extra oracle padding levels")
    p_norm.add_argument("--json", action="store_true")
    p_norm.set_defaults(func=cmd_norm)

    p_check = sub.add_parser("check", help="run a property suite")
    p_check.add_argument("suite", help=", ".join(sorted(checks.SUITES)))
    p_check.add_argument("--seed", type=int, default=_default_seed())
    p_check.add_argument("--json", action="store_true")
    for key in sorted(_SUITE_PARAMS):
        p_check.add_argument(f"--{key.replace('_', '-')}", dest=key, type=int, default=None)
    p_check.set_defaults(func=cmd_check)

    p_extend = sub.add_parser("extend", help="extend a subspace metric to the space")
    p_extend.add_argument("path")
    p_extend.add_argument("--json", action="store_true")
    p_extend.set_defaults(func=cmd_extend)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
