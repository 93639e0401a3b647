"""Command-line front end.

Exit status: 0 on success, 1 when algorithms disagree or a validation
fails, 2 on usage errors and malformed input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from .bivariate import LexGB
from .bench import ALGORITHMS, CSV_COLUMNS, RunConfig, annihilate, bench, derive_seeds, generate_instance, grid
from .ring import DEFAULT_PRIME, ContractError, ParameterError, TruncPoly
from .sequences import AnnPoly, PartialSequence
from .sparse import (
    DeterminantFailure,
    SparseMatrixA,
    coordinate_annihilator,
    dense_det_oracle,
    determinant,
    minimal_ideal_of_matrix,
    random_sparse_matrix,
)

EXIT_OK, EXIT_DISAGREE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _signed(c: int, p: int) -> int:
    return c - p if c > p // 2 else c


def format_truncpoly(a: TruncPoly) -> str:
    parts = []
    for i, c in enumerate(a.to_list()):
        if c:
            parts.append((_signed(c, a.p), f"x^{i}" if i > 1 else ("x" if i == 1 else "")))
    return _join(parts)


def format_annpoly(P: AnnPoly) -> str:
    parts = []
    for j in range(P.degree, -1, -1):
        ym = f"y^{j}" if j > 1 else ("y" if j == 1 else "")
        for i in range(P.d - 1, -1, -1):
            c = int(P.coeffs[j, i])
            if c:
                xm = f"x^{i}" if i > 1 else ("x" if i == 1 else "")
                parts.append((_signed(c, P.p), "*".join(m for m in (xm, ym) if m)))
    return _join(parts)


def _join(parts) -> str:
    if not parts:
        return "0"
    out = ""
    for k, (c, mono) in enumerate(parts):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = mono if mono and mag == 1 else (f"{mag}*{mono}" if mono else str(mag))
        out += (sign if c < 0 else "") + body if k == 0 else f" {sign} {body}"
    return out


def _int_list(text: str) -> list[int]:
    try:
        vals = [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _algos(text: str) -> tuple[str, ...]:
    if text == "all":
        return ALGORITHMS
    names = tuple(t.strip() for t in text.split(",") if t.strip())
    bad = [n for n in names if n not in ALGORITHMS]
    if bad or not names:
        raise argparse.ArgumentTypeError(f"unknown algorithm(s) {bad}; choose from {', '.join(ALGORITHMS)} or all")
    return names


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="trunclrs", description="Annihilators of linearly recurrent sequences over F_p[x]/(x^d).")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, fmt_default="json", fmts=("json", "table"), p_default=DEFAULT_PRIME):
        sp.add_argument("--p", type=int, default=p_default, help="prime modulus")
        sp.add_argument("--seed", type=int, default=0, help="root seed; every report echoes it")
        sp.add_argument("--format", choices=fmts, default=fmt_default)

    g = sub.add_parser("gen", help="random Lazard basis and a sequence it cancels (or a sparse matrix)")
    common(g)
    g.add_argument("--d", type=int, required=True)
    g.add_argument("--delta", type=int, help="maximal beta-degree of the staircase")
    g.add_argument("--n", type=int, default=1, help="sequence width, or matrix size with --matrix")
    g.add_argument("--e", type=int, help="number of terms (default 2*delta)")
    g.add_argument("--t", type=int, default=1, help="number of staircase steps (d_opt)")
    g.add_argument("--matrix", action="store_true", help="write a random sparse matrix instead")
    g.add_argument("--out", default="instance", help="output prefix")

    a = sub.add_parser("annihilate", help="annihilator of a sequence file")
    common(a, p_default=None)
    a.add_argument("sequence", help="sequence JSON file")
    a.add_argument("--algo", type=_algos, default=ALGORITHMS, help="comma-separated subset of %s, or all" % ",".join(ALGORITHMS))
    a.add_argument("--e", type=int, help="use only the first e terms")
    a.add_argument("--kappa", type=int)
    a.add_argument("--verify", action="store_true", help="majority vote for the compressed algorithm")
    a.add_argument("--gb", help="Groebner basis JSON the result is compared with (staircase only)")

    b = sub.add_parser("bench", help="timing table, one row per parameter point")
    common(b, "csv", ("csv", "table", "json"))
    b.add_argument("--n", type=_int_list, default=[1])
    b.add_argument("--d", type=_int_list, default=[8])
    b.add_argument("--delta", type=_int_list, default=[8])
    b.add_argument("--t", type=int, default=1)
    b.add_argument("--algo", type=_algos, default=ALGORITHMS)
    b.add_argument("--trials", type=int, default=3)
    b.add_argument("--kappa", type=int)
    b.add_argument("--verify", action="store_true")

    for name, helptext in (("det", "determinant of a sparse matrix"), ("minpoly", "minimal-polynomial ideal of a sparse matrix")):
        m = sub.add_parser(name, help=helptext)
        common(m, p_default=None)
        m.add_argument("matrix", help="matrix text file")
        m.add_argument("--oracle", action="store_true", help="cross-check with a dense computation")
    return ap


def _emit(obj, fmt: str, table_lines, out):
    if fmt == "json":
        out.write(json.dumps(obj, indent=2) + "\n")
    else:
        out.write("\n".join(table_lines) + "\n")


def cmd_gen(args, out) -> int:
    if args.matrix:
        A = random_sparse_matrix(args.n, args.d, seed=args.seed, p=args.p)
        path = Path(f"{args.out}.matrix.txt")
        A.dump(path)
        _emit({"seed": args.seed, "matrix": str(path), "size": A.size, "nnz": A.nnz}, args.format, [f"matrix {path} size={A.size} nnz={A.nnz} seed={args.seed}"], out)
        return EXIT_OK
    if args.delta is None:
        raise UsageError("gen needs --delta (or --matrix)")
    cfg = RunConfig(p=args.p, d=args.d, delta=args.delta, n=args.n, e=args.e, t=args.t, seed=args.seed)
    inst = generate_instance(cfg)
    seq_path, gb_path = Path(f"{args.out}.seq.json"), Path(f"{args.out}.gb.json")
    inst.sequence.dump(seq_path)
    inst.gb.dump(gb_path)
    info = {
        "seed": args.seed,
        "child_seeds": list(inst.seeds),
        "sequence": str(seq_path),
        "gb": str(gb_path),
        "staircase": [list(c) for c in inst.gb.staircase.corners],
        "D": inst.gb.staircase.D,
        "t": inst.gb.t,
    }
    _emit(info, args.format, [f"{k}: {v}" for k, v in info.items()], out)
    return EXIT_OK


def cmd_annihilate(args, out) -> int:
    S = PartialSequence.load(args.sequence)
    if args.p is not None and args.p != S.p:
        raise UsageError(f"--p {args.p} contradicts the sequence file (p = {S.p})")
    if args.e is not None:
        if not 2 <= args.e <= S.e:
            raise UsageError(f"--e must lie in [2, {S.e}]")
        S = S[: args.e]
    if S.e < 2:
        raise UsageError("need at least two terms")
    rep = annihilate(S, args.algo, seed=args.seed, kappa=args.kappa, verify=args.verify)
    obj = rep.to_json()
    status = EXIT_OK if rep.agree in (None, True) else EXIT_DISAGREE
    if args.gb:
        expected = LexGB.load(args.gb).staircase
        obj["matches_gb"] = expected.heights == rep.reference.staircase.heights
        if not obj["matches_gb"]:
            status = EXIT_DISAGREE
    lines = [f"seed {args.seed}", f"staircase corners {rep.reference.staircase.corners}  D={rep.D}  d_opt={rep.d_opt}"]
    if rep.dstar is not None:
        lines.append(f"d* = {rep.dstar}")
    for name, st in rep.staircases.items():
        lines.append(f"{name:10s} {rep.times[name]:.4f}s corners={st.corners}")
    lines.append("generators:")
    lines.extend("  " + format_annpoly(P) for P in rep.reference.to_annpolys())
    if rep.agree is not None:
        lines.append("agreement: " + ("yes" if rep.agree else "NO"))
    if "matches_gb" in obj:
        lines.append("matches --gb staircase: " + ("yes" if obj["matches_gb"] else "NO"))
    _emit(obj, args.format, lines, out)
    return status


def cmd_bench(args, out) -> int:
    base = RunConfig(p=args.p, t=args.t, algorithms=args.algo, seed=args.seed, trials=args.trials, kappa=args.kappa, verify=args.verify)
    rows = bench(grid(args.n, args.d, args.delta), base)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in rows:
            w.writerow(r.cells())
        out.write(buf.getvalue())
    elif args.format == "table":
        table = [list(CSV_COLUMNS)] + [r.cells() for r in rows]
        widths = [max(len(row[k]) for row in table) for k in range(len(CSV_COLUMNS))]
        for row in table:
            out.write("  ".join(c.rjust(wd) for c, wd in zip(row, widths)) + "\n")
    else:
        out.write(json.dumps({"seed": args.seed, "rows": [dict(zip(CSV_COLUMNS, r.cells())) | {"agree": r.agree} for r in rows]}, indent=2) + "\n")
    return EXIT_DISAGREE if any(r.agree is False for r in rows) else EXIT_OK


def _load_matrix(args) -> SparseMatrixA:
    A = SparseMatrixA.load(args.matrix)
    if args.p is not None and args.p != A.p:
        raise UsageError(f"--p {args.p} contradicts the matrix file (p = {A.p})")
    return A


def cmd_det(args, out) -> int:
    A = _load_matrix(args)
    (seed,) = derive_seeds(args.seed, 1)
    try:
        res = determinant(A, seed=seed)
    except DeterminantFailure as exc:
        _emit({"seed": args.seed, "error": str(exc)}, args.format, [f"failure: {exc}"], out)
        return EXIT_DISAGREE
    obj = {"seed": args.seed, "det": res.value.to_list(), "attempts": res.attempts}
    lines = [f"det = {format_truncpoly(res.value)}", f"attempts = {res.attempts}"]
    status = EXIT_OK
    if args.oracle:
        ok = dense_det_oracle(A) == res.value
        obj["oracle_match"] = ok
        lines.append("oracle: " + ("match" if ok else "MISMATCH"))
        status = EXIT_OK if ok else EXIT_DISAGREE
    _emit(obj, args.format, lines, out)
    return status


def cmd_minpoly(args, out) -> int:
    A = _load_matrix(args)
    (seed,) = derive_seeds(args.seed, 1)
    res = minimal_ideal_of_matrix(A, seed=seed)
    gens = res.generators
    obj = {
        "seed": args.seed,
        "tau": res.tau,
        "fallback": res.fallback,
        "staircase": [list(c) for c in res.basis.staircase.corners],
        "generators": [P.to_lists() for P in gens],
        "pretty": [format_annpoly(P) for P in gens],
    }
    lines = [f"tau = {res.tau}" + (" (coordinate fallback)" if res.fallback else "")] + [format_annpoly(P) for P in gens]
    status = EXIT_OK
    if args.oracle:
        ok = coordinate_annihilator(A) == res.basis
        obj["oracle_match"] = ok
        lines.append("oracle: " + ("match" if ok else "MISMATCH"))
        status = EXIT_OK if ok else EXIT_DISAGREE
    _emit(obj, args.format, lines, out)
    return status


COMMANDS = {"gen": cmd_gen, "annihilate": cmd_annihilate, "bench": cmd_bench, "det": cmd_det, "minpoly": cmd_minpoly}


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, out)
    except (UsageError, ParameterError, ContractError, OSError, json.JSONDecodeError) as exc:
        print(f"trunclrs {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
