"""Command-line entry point: ``matgen <subcommand> ...``.

Exit codes: 0 computed (whatever the mathematical verdict), 1 bad input or
failed precondition, 2 resource cap exceeded, 3 corpus regression mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import circulant, density, g2, gentest, presentations
from .linalg import GF, ZZ, IntMatrix
from .words import NcPoly

EXIT_OK, EXIT_INPUT, EXIT_CAP, EXIT_MISMATCH = 0, 1, 2, 3


class InputError(ValueError):
    pass


def _json_default(o):
    if hasattr(o, "to_dict"):
        return o.to_dict()
    if isinstance(o, IntMatrix):
        return [[str(v) for v in r] for r in o.to_rows()]
    if isinstance(o, (set, frozenset, tuple)):
        return list(o)
    raise TypeError(f"cannot serialise {type(o).__name__}")


def emit(obj, out=None):
    out = out or sys.stdout
    out.write(json.dumps(obj, default=_json_default, indent=2, sort_keys=True) + "\n")


def _load_json(path: str) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise InputError("input must be a JSON object")
    return data


def _matrix(data: dict, key: str, ring=ZZ) -> IntMatrix:
    rows = data.get(key)
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise InputError(f"missing or malformed matrix {key!r}")
    try:
        return IntMatrix.from_rows([[int(v) for v in r] for r in rows], ring)
    except (TypeError, ValueError) as exc:
        raise InputError(f"matrix {key!r}: {exc}") from exc


def _block_sizes(data: dict, ring) -> tuple[tuple[int, ...] | None, list | None]:
    """Sizes and optional per-block pairs from "blocks": [2, 3] or [{"n": 2, "A": .., "B": ..}, ..]."""
    blocks = data.get("blocks")
    if not blocks:
        return None, None
    if not isinstance(blocks, list):
        raise InputError("'blocks' must be a list")
    sizes, pairs = [], []
    for b in blocks:
        if isinstance(b, dict):
            if "n" not in b:
                raise InputError("each block needs 'n'")
            sizes.append(int(b["n"]))
            if "A" in b or "B" in b:
                pairs.append((_matrix(b, "A", ring), _matrix(b, "B", ring)))
        else:
            sizes.append(int(b))
    if pairs and len(pairs) != len(sizes):
        raise InputError("give A and B for every block or for none")
    return tuple(sizes), pairs or None


def load_pair(path: str) -> tuple[IntMatrix, IntMatrix, dict]:
    """{"n": optional size, "A": [[..]], "B": [[..]], "p": optional prime, "blocks": optional}.

    With per-block matrices in "blocks" the top-level A and B may be omitted.
    """
    data = _load_json(path)
    ring = GF(int(data["p"])) if data.get("p") else ZZ
    sizes, pairs = _block_sizes(data, ring)
    if pairs and "A" not in data and "B" not in data:
        A, B = gentest.block_pair(pairs)
    else:
        A, B = _matrix(data, "A", ring), _matrix(data, "B", ring)
    if A.shape != B.shape or not A.is_square:
        raise InputError(f"A and B must be square of the same size, got {A.shape} and {B.shape}")
    if "n" in data and int(data["n"]) != A.rows:
        raise InputError(f"declared n={data['n']} but the matrices are {A.rows}x{A.rows}")
    data["_sizes"] = sizes
    return A, B, data


def _ints(text: str) -> list[int]:
    return [int(t) for t in text.replace(",", " ").split()]


# ---------------------------------------------------------------------------
# subcommands


def cmd_check(args):
    A, B, data = load_pair(args.input)
    if data["_sizes"]:
        target = gentest.ProductRing(data["_sizes"])
    else:
        target = gentest.MatrixRing(A.rows, A.ring.p if A.ring.kind == "GF" else None)
    emit(gentest.is_generating(A, B, target, unital=args.unital))


def cmd_msl(args):
    if args.survey:
        if args.seed is None:
            raise InputError("surveys need an explicit --seed")
        emit(gentest.msl_survey(args.n, args.p, args.samples, args.seed, args.shards))
        return
    if not args.input:
        raise InputError("msl needs --input or --survey")
    A, B, _ = load_pair(args.input)
    field = args.field if args.field in ("ZZ", "QQ") else int(args.field)
    try:
        emit({"msl": gentest.msl(A, B, field), "field": str(field)})
    except gentest.NotGenerating as exc:
        emit({"msl": None, "field": str(field), "note": str(exc)})


def cmd_g2(args):
    if args.action == "solve":
        if args.c is None:
            raise InputError("solve needs --c")
        sols = g2.enumerate_solutions(args.c, args.count, signs=args.signs)
        rows = []
        for sol in sols:
            row = sol.to_dict()
            A1, B1 = sol.pair()
            row["generates"] = g2.g2_fast_check(A1, B1).generates
            if args.emit_pairs:
                row["A"], row["B"] = A1, B1
            rows.append(row)
        emit({"c": args.c, "solutions": rows})
        return
    if not args.input:
        raise InputError("check needs --input")
    A, B, _ = load_pair(args.input)
    out = {"check": g2.g2_fast_check(A, B)}
    try:
        out["normal_form"] = g2.reduce_triple(A, B)
    except g2.NotGeneratingTriple as exc:
        out["normal_form"] = None
        out["note"] = str(exc)
    emit(out)


def cmd_pell(args):
    sols = g2.enumerate_solutions(args.c, args.count, signs=args.signs)
    out = {"c": args.c, "solutions": [s.to_dict() for s in sols]}
    if args.c != 0:
        out["fundamental_unit"] = g2.pell_fundamental(args.c)
    emit(out)


def _spec(args) -> presentations.PresentationSpec:
    params = {}
    if args.m is not None:
        params["m"] = args.m
    if args.transpose:
        params["transpose"] = True
    if args.H:
        params["H"] = _ints(args.H)
    if args.h is not None:
        params["h"] = args.h
    if args.relators:
        rels = presentations.parse_relator_file(Path(args.relators).read_text(), not args.non_unital)
        return presentations.PresentationSpec(args.n, "file", rels, [f"r{i}" for i in range(len(rels))], not args.non_unital)
    return presentations.standard_relators(args.n, args.variant, **params)


def cmd_present(args):
    spec = _spec(args)
    if args.action == "relators":
        emit(spec)
    elif args.action == "rank":
        emit(presentations.bounded_quotient_rank(spec, args.L, args.m_words, cap=args.max_degree))
    elif args.action == "member":
        if not args.target:
            raise InputError("member needs --target")
        target = NcPoly.parse(args.target, spec.unital)
        cert = presentations.ideal_membership_bounded(target, spec, args.L, cap=args.max_degree)
        emit({"target": str(target), "L": args.L, "member": cert is not None, "certificate": cert})
    elif args.action == "check":
        if not args.input:
            raise InputError("check needs --input")
        A, B, _ = load_pair(args.input)
        emit(presentations.check_relations(A, B, spec))
    elif args.action == "hcheck":
        emit(presentations.check_H_conditions(args.n, _ints(args.H or ""), args.zero_sums))


def cmd_witness(args):
    emit(presentations.witness_rank_growth(args.kind, args.n, args.h, _ints(args.cutoffs)))


def cmd_magnus(args):
    emit(presentations.magnus_directness(args.n))


def cmd_noidentity(args):
    emit(presentations.noidentity_check(args.n, args.L, cap=args.max_degree))


def cmd_circulant(args):
    if args.action == "units":
        pairs = circulant.find_circulant_units(args.n, args.bound, cap=args.cap)
        emit({"n": args.n, "bound": args.bound, "units": pairs, "nontrivial": sum(not p.trivial for p in pairs)})
    elif args.action == "higman":
        emit({"n": args.n, "rank": circulant.higman_rank(args.n)})
    elif args.action == "y1":
        emit(circulant.build_and_verify_Y1(_ints(args.c), _ints(args.d)))


def cmd_rep(args):
    data = _load_json(args.input)
    X1 = _matrix(data, "X1")
    if args.action == "canonicalize":
        Y1 = _matrix(data, "Y1")
        emit(circulant.canonicalize_representation(X1, Y1, args.n))
    else:
        emit(circulant.nonneg_root_check(X1, args.n))


def cmd_density(args):
    if args.kind in ("fq", "g2z", "sweep") and args.seed is None and not args.exhaustive:
        raise InputError("Monte-Carlo runs need an explicit --seed")
    if args.kind == "fq":
        res = [density.fq_fraction(args.n, args.q, "exhaustive" if args.exhaustive else "mc", args.samples, args.seed or 0, args.shards, args.cap)]
    elif args.kind == "g2z":
        res = [density.g2z_box_fraction(args.k, args.samples, args.seed, args.shards)]
    elif args.kind == "sweep":
        res = density.fq_sweep(_ints(args.ns), _ints(args.qs), args.samples, args.seed, args.cap)
    else:
        mc = None
        if args.samples and args.k:
            if args.seed is None:
                raise InputError("Monte-Carlo runs need an explicit --seed")
            mc = (args.k, args.samples, args.seed)
        rep = density.coprimality_product(args.pcut, mc, args.shards)
        if args.format == "csv":
            sys.stdout.write(density.to_csv([rep.mc] if rep.mc else []))
            sys.stdout.write(f"# truncated product P={args.pcut}: {rep.decimal!r}\n")
        else:
            emit(rep)
        return
    if args.format == "csv":
        sys.stdout.write(density.to_csv(res))
    else:
        emit(res if len(res) > 1 else res[0])


def cmd_corpus(args):
    from .corpus import run_corpus

    report = run_corpus()
    if args.golden:
        golden = json.loads(Path(args.golden).read_text())
        report["golden_match"] = json.loads(json.dumps(report["entries"], default=_json_default)) == golden["entries"]
        report["ok"] = report["ok"] and report["golden_match"]
    if args.write_golden:
        Path(args.write_golden).write_text(json.dumps(report, default=_json_default, indent=2, sort_keys=True) + "\n")
    emit(report)
    return EXIT_OK if report["ok"] else EXIT_MISMATCH


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="matgen", description="Generators and presentations of integer matrix rings")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--max-degree", type=int, default=presentations.DEFAULT_MAX_DEGREE, help="cap on the degree bound L")
    p.add_argument("--cap", type=int, default=circulant.DEFAULT_BOX_CAP, help="cap on box / exhaustive sizes")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", help="does a pair generate the target ring")
    s.add_argument("--input", required=True)
    s.add_argument("--unital", action="store_true")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("msl", help="minimum spanning length, or a seeded survey")
    s.add_argument("--input")
    s.add_argument("--field", default="ZZ", help="ZZ, QQ or a prime")
    s.add_argument("--survey", action="store_true")
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--p", type=int, default=3)
    s.add_argument("--samples", type=int, default=1000)
    s.add_argument("--seed", type=int)
    s.add_argument("--shards", type=int, default=1)
    s.set_defaults(func=cmd_msl)

    s = sub.add_parser("g2", help="2x2 determinant test and normal form, or quadratic-unit solutions")
    s.add_argument("action", nargs="?", choices=["check", "solve"], default="check")
    s.add_argument("--input")
    s.add_argument("--c", type=int)
    s.add_argument("--count", type=int, default=5)
    s.add_argument("--signs", action="store_true")
    s.add_argument("--emit-pairs", action="store_true")
    s.set_defaults(func=cmd_g2)

    s = sub.add_parser("pell", help="solutions of a^2 - abc - b^2 = +-1")
    s.add_argument("--c", type=int, required=True)
    s.add_argument("--count", type=int, default=5)
    s.add_argument("--signs", action="store_true")
    s.set_defaults(func=cmd_pell)

    s = sub.add_parser("present", help="relators, bounded quotient ranks, ideal membership")
    s.add_argument("action", choices=["relators", "rank", "member", "check", "hcheck"])
    s.add_argument("--variant", default="grigdream")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--m", type=int, help="shift for the modular variant")
    s.add_argument("--transpose", action="store_true")
    s.add_argument("--H", help="comma-separated subset of 1..n-1")
    s.add_argument("--h", type=int)
    s.add_argument("--L", type=int, default=8)
    s.add_argument("--m-words", type=int, help="word length for the quotient image (default L - max relator degree)")
    s.add_argument("--target")
    s.add_argument("--input")
    s.add_argument("--relators", help="file with one relator per line")
    s.add_argument("--non-unital", action="store_true")
    s.add_argument("--zero-sums", choices=["exclude", "violation"], default="exclude")
    s.set_defaults(func=cmd_present)

    s = sub.add_parser("witness", help="infinite-rank witnesses")
    s.add_argument("--kind", choices=["elim1", "elim2", "elim7", "elim8"], required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--h", type=int)
    s.add_argument("--cutoffs", default="4,8,12")
    s.set_defaults(func=cmd_witness)

    s = sub.add_parser("magnus", help="ideal lattices in the extension ring")
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_magnus)

    s = sub.add_parser("noidentity", help="the presentation without identity")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--L", type=int)
    s.set_defaults(func=cmd_noidentity)

    s = sub.add_parser("circulant", help="circulant units and idempotents")
    s.add_argument("action", choices=["units", "higman", "y1"])
    s.add_argument("--n", type=int)
    s.add_argument("--bound", type=int, default=2)
    s.add_argument("--c", help="comma-separated first row; write --c=-1,... when it starts with a minus")
    s.add_argument("--d", help="first row of the inverse circulant, same syntax as --c")
    s.set_defaults(func=cmd_circulant)

    s = sub.add_parser("rep", help="canonical form of representations")
    s.add_argument("action", choices=["canonicalize", "nonneg"])
    s.add_argument("--input", required=True)
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_rep)

    s = sub.add_parser("density", help="density experiments")
    s.add_argument("kind", choices=["fq", "g2z", "coprime", "sweep"])
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--q", type=int, default=2)
    s.add_argument("--k", type=int)
    s.add_argument("--ns", default="2")
    s.add_argument("--qs", default="2,3,5")
    s.add_argument("--pcut", type=int, default=1000)
    s.add_argument("--samples", type=int, default=10000)
    s.add_argument("--seed", type=int)
    s.add_argument("--shards", type=int, default=1)
    s.add_argument("--exhaustive", action="store_true")
    s.set_defaults(func=cmd_density)

    s = sub.add_parser("corpus", help="regression suite of the reference examples")
    s.add_argument("--golden", help="compare entries with a stored report")
    s.add_argument("--write-golden", help="store the report")
    s.set_defaults(func=cmd_corpus)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        code = args.func(args)
    except presentations.ResourceCapExceeded as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (InputError, ValueError, KeyError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return code or EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
