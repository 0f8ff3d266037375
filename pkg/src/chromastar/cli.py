"""Command-line interface: ``chromastar <command> ...``.

Exit status is 2 for unparsable input, 1 for a failed verification or
reconstruction, and 0 otherwise.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from .analysis import (
    adjacency_records,
    deep_count_from_lead,
    leading_term,
    n_p_table,
    predicted_leading_coeff,
)
from .graph import Forest, format_tree, iter_free_trees, lambda_lc, parse_tree, to_dot
from .partition import partition_count
from .reconstruct import reconstruct
from .starcsf import StarPoly, format_starpoly, parse_starpoly, star_expand, starpoly_to_json
from .subspace import basis_index, caterpillar_basis, csf_matrix, exact_rank, express_in_basis
from .verify import THEOREMS, run_check

DEFAULT_MAX_N = 14


class InputError(Exception):
    """Unparsable or out-of-range user input (exit status 2)."""


def _read_source(arg: str) -> str:
    if arg == "-":
        return sys.stdin.read()
    if os.path.isfile(arg):
        with open(arg, encoding="utf-8") as fh:
            return fh.read()
    return arg


def _load_tree(arg: str) -> Forest:
    try:
        return parse_tree(_read_source(arg))
    except ValueError as exc:
        raise InputError(f"cannot parse tree: {exc}") from None


def _parse_csf(text: str) -> StarPoly:
    try:
        return parse_starpoly(text)
    except ValueError as exc:
        raise InputError(f"cannot parse star polynomial: {exc}") from None


def _load_csf(arg: str) -> StarPoly:
    return _parse_csf(_read_source(arg))


def _max_n() -> int:
    raw = os.environ.get("CHROMA_STAR_MAX_N")
    if raw is None:
        return DEFAULT_MAX_N
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"CHROMA_STAR_MAX_N must be an integer, got {raw!r}") from None


def _check_n(n: int, low: int = 1) -> None:
    if n < low:
        raise InputError(f"-n must be at least {low}")
    cap = _max_n()
    if n > cap:
        raise InputError(f"-n {n} exceeds the limit {cap}; raise CHROMA_STAR_MAX_N to allow it")


def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _poly_obj(f: StarPoly) -> dict:
    return json.loads(starpoly_to_json(f))


# -- commands ----------------------------------------------------------------


def cmd_csf(args) -> int:
    T = _load_tree(args.tree)
    f = star_expand(T)
    _emit(starpoly_to_json(f) if args.json else format_starpoly(f))
    if args.emit_dot:
        _write_dot(T, args.emit_dot)
    return 0


def _analysis_obj(f: StarPoly, k: int) -> dict:
    lt = leading_term(f)
    return {
        "degree": f.degree,
        "lead_partition": list(lt.partition),
        "lead_coeff": lt.coeff,
        "deep_count": deep_count_from_lead(lt.partition),
        "records": [
            {"mu": list(r.mu), "coeff": r.coeff, "e_mu": sorted(r.e_mu.elements(), reverse=True)}
            for r in adjacency_records(f, k)
        ],
        "n_p": {str(p): v for p, v in n_p_table(f).items()},
    }


def cmd_analyze(args) -> int:
    text = _read_source(args.input)
    tree = None
    try:
        tree = parse_tree(text)
        f = star_expand(tree)
    except ValueError:
        f = _parse_csf(text)
    if f.is_zero():
        raise InputError("cannot analyze the zero polynomial")
    obj = _analysis_obj(f, args.k)
    if tree is not None:
        obj["tree"] = format_tree(tree)
        obj["lambda_lc"] = list(lambda_lc(tree))
        obj["predicted_lead_coeff"] = predicted_leading_coeff(tree)
    _emit(json.dumps(obj))
    return 0


def _write_dot(T: Forest, target: str) -> None:
    text = to_dot(T)
    if target == "-":
        sys.stdout.write(text)
    else:
        with open(target, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_reconstruct(args) -> int:
    source = args.in_path or args.input
    if source is None:
        raise InputError("reconstruct needs a star polynomial (positional or --in)")
    f = _load_csf(source)
    result = reconstruct(f)
    if not result.ok:
        _emit(json.dumps(result.to_obj()))
        return 1
    text = format_tree(result.tree) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    if args.json:
        _emit(json.dumps(result.to_obj()))
    elif not args.out:
        sys.stdout.write(text)
    if args.emit_dot:
        target = args.emit_dot
        if target == "-" and args.out:
            target = os.path.splitext(args.out)[0] + ".dot"
        _write_dot(result.tree, target)
    return 0


def cmd_rank(args) -> int:
    _check_n(args.n)
    trees = list(iter_free_trees(args.n))
    if args.jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            polys = list(pool.map(star_expand, trees, chunksize=16))
    else:
        polys = [star_expand(T) for T in trees]
    M = csf_matrix(args.n, trees, polys)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(M.to_csv())
    p_n = partition_count(args.n)
    obj = {
        "n": args.n,
        "trees": len(trees),
        "p_n": p_n,
        "rank": exact_rank(M),
        "expected": p_n - args.n + 1,
    }
    _emit(json.dumps(obj))
    return 0 if obj["rank"] == obj["expected"] else 1


def _frac(x) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def cmd_basis(args) -> int:
    if args.expand:
        T = _load_tree(args.expand)
        if args.n is not None and args.n != T.n_vertices:
            raise InputError(f"-n {args.n} does not match the tree's {T.n_vertices} vertices")
        _check_n(T.n_vertices)
        f = star_expand(T)
        exp = express_in_basis(f)
        obj = {
            "target": _poly_obj(f),
            "coefficients": [
                {"partition": list(mu), "caterpillar": basis_index(mu), "coeff": _frac(c)}
                for mu, c in exp.nonzero().items()
            ],
        }
        _emit(json.dumps(obj))
        return 0
    if args.n is None:
        raise InputError("basis needs -n or --expand")
    _check_n(args.n)
    obj = [
        {"partition": list(mu), "caterpillar": basis_index(mu), "tree": format_tree(C)}
        for mu, C in caterpillar_basis(args.n)
    ]
    _emit(json.dumps(obj))
    return 0


def cmd_verify(args) -> int:
    _check_n(args.n)
    names = [args.theorem] if args.theorem else [t for t in THEOREMS]
    results = [run_check(t, args.n, seed=args.seed, jobs=args.jobs, limit=args.limit) for t in names]
    if args.json:
        _emit(json.dumps([
            {"theorem": r.theorem, "n": r.n, "checked": r.checked, "passed": r.passed,
             "failures": r.failures[:20]}
            for r in results
        ]))
    else:
        for r in results:
            _emit(r.line())
            for msg in r.failures[:5]:
                _emit(f"    {msg}")
    return 0 if all(r.passed for r in results) else 1


def cmd_enumerate(args) -> int:
    _check_n(args.n)
    for i, T in enumerate(iter_free_trees(args.n)):
        if args.limit is not None and i >= args.limit:
            break
        if args.json:
            _emit(json.dumps({"n": T.n_vertices, "edges": [list(e) for e in T.sorted_edges()]}))
        else:
            _emit(format_tree(T))
    return 0


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chromastar",
        description="Star-basis chromatic symmetric functions of trees.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("csf", help="expand a tree in the star basis")
    p.add_argument("tree", help="tree text 'n; u-v, ...', C[a1,...], a file path, or -")
    p.add_argument("--json", action="store_true")
    p.add_argument("--emit-dot", nargs="?", const="-", metavar="PATH",
                   help="also write the tree as DOT (stdout when no path)")
    p.set_defaults(func=cmd_csf)

    p = sub.add_parser("analyze", help="leading term, adjacency records and N(p)")
    p.add_argument("input", help="a tree or a star polynomial (text, JSON, file, or -)")
    p.add_argument("-k", type=int, default=1, help="edge count of the adjacency records")
    p.add_argument("--json", action="store_true", help="accepted for symmetry; output is JSON")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("reconstruct", help="rebuild a tree from its star polynomial")
    p.add_argument("input", nargs="?", help="star polynomial text, JSON, file, or -")
    p.add_argument("--in", dest="in_path", metavar="PATH")
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--json", action="store_true")
    p.add_argument("--emit-dot", nargs="?", const="-", metavar="PATH",
                   help="write DOT next to --out, to PATH, or to stdout")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("rank", help="rank of the matrix of all n-vertex tree expansions")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--csv", metavar="PATH", help="export the matrix with a partition header row")
    p.add_argument("--json", action="store_true", help="accepted for symmetry; output is JSON")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("basis", help="caterpillar basis, or a tree's coordinates on it")
    p.add_argument("-n", type=int)
    p.add_argument("--expand", metavar="TREE")
    p.add_argument("--json", action="store_true", help="accepted for symmetry; output is JSON")
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("verify", help="run property checks over all n-vertex trees")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--theorem", choices=THEOREMS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--limit", type=int)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("enumerate", help="list one tree per isomorphism class")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--limit", type=int)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_enumerate)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
