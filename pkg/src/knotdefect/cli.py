"""Command-line front end.

Exit codes: 0 yes/success, 1 no, 2 usage or parse error, 3 a search cap was
hit so the answer is unknown.  Results go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

from .diagram import (DiagramError, compute_faces, generate_random_unknot, parse_diagram,
                      serialize_diagram, validate)
from .masred import (MasError, MasSyntaxError, build_reduction, is_axiom_set, min_axiom_set,
                     parse_mas, preprocess, witness_untangling)
from .moves import (InfeasibleMoveError, MoveSyntaxError, NotAnUntanglingError, apply_move,
                    enumerate_moves, format_move, format_moves, parse_moves, sequence_defect)
from .render import render_svg
from .untangle import SOLVERS, SearchLimitExceeded, min_defect_result

YES, NO, USAGE, UNKNOWN = 0, 1, 2, 3


class _Usage(Exception):
    """Bad input file or argument; maps to exit code 2."""


def _read(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise _Usage(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise _Usage(f"cannot write {path}: {exc.strerror}") from None


def _load_diagram(path: str):
    try:
        return parse_diagram(_read(path))
    except DiagramError as exc:
        raise _Usage(f"{path}: {exc}") from None


def _load_moves(path: str):
    try:
        return parse_moves(_read(path))
    except MoveSyntaxError as exc:
        raise _Usage(f"{path}: {exc}") from None


def _load_mas(path: str):
    try:
        return parse_mas(_read(path))
    except (MasSyntaxError, MasError) as exc:
        raise _Usage(f"{path}: {exc}") from None


def _emit(args, report: dict, text: str):
    if args.json:
        sys.stdout.write(json.dumps(report, sort_keys=True) + "\n")
    else:
        sys.stdout.write(text)


def _err(msg: str):
    print(f"knotdefect: {msg}", file=sys.stderr)


# subcommands

def cmd_validate(args) -> int:
    try:
        d = parse_diagram(_read(args.file), check=False)
    except DiagramError as exc:
        raise _Usage(f"{args.file}: {exc}") from None
    rep = validate(d)
    _emit(args, {"valid": rep.ok, "problems": rep.problems, "crossings": d.n},
          f"ok ({d.n} crossings)\n" if rep.ok else "invalid\n")
    for p in rep.problems:
        _err(p)
    return YES if rep.ok else NO


def cmd_faces(args) -> int:
    d = _load_diagram(args.file)
    outer = set(d.outer_face())
    faces = compute_faces(d)
    tails = d.face_tails() if d.adj else [[]]
    rows = []
    for f, ts in zip(faces, tails):
        rows.append({"outer": bool(outer) and ts[0] in outer if ts else True,
                     "edges": [[e.tail, e.out_slot, e.head, e.in_slot] for e in f]})
    lines = []
    for i, r in enumerate(rows):
        body = " ".join(f"{a}.{b}->{c}.{e}" for a, b, c, e in r["edges"]) or "(empty)"
        lines.append(f"face {i}{' outer' if r['outer'] else ''}: {body}\n")
    _emit(args, {"faces": rows, "count": len(rows)}, "".join(lines))
    return YES


def cmd_moves(args) -> int:
    d = _load_diagram(args.file)
    kinds = args.kinds.split(",") if args.kinds else None
    try:
        ms = enumerate_moves(d, kinds)
    except ValueError as exc:
        raise _Usage(str(exc)) from None
    _emit(args, {"moves": [format_move(m) for m in ms], "count": len(ms)}, format_moves(ms))
    return YES


def _replay(d, ms):
    for i, m in enumerate(ms, 1):
        try:
            d = apply_move(d, m)
        except InfeasibleMoveError as exc:
            _err(f"move {i} ({format_move(m)}) is infeasible: {exc}")
            return None
    return d


def cmd_apply(args) -> int:
    d = _load_diagram(args.file)
    end = _replay(d, _load_moves(args.moves))
    if end is None:
        return NO
    text = serialize_diagram(end)
    _emit(args, {"crossings": end.n, "diagram": text}, text)
    return YES


def cmd_defect(args) -> int:
    d = _load_diagram(args.file)
    ms = _load_moves(args.moves)
    if _replay(d, ms) is None:
        return NO
    try:
        k = sequence_defect(d, ms)
    except NotAnUntanglingError as exc:
        _err(f"not an untangling: {exc}")
        return NO
    _emit(args, {"defect": k, "moves": len(ms), "crossings": d.n}, f"{k}\n")
    return YES


def _caps(args) -> dict:
    return {"max_nodes": args.max_nodes, "max_seconds": args.max_seconds}


def _result_text(res) -> str:
    if res.yes:
        return format_moves(res.witness)
    return f"{res.answer}\n"


def cmd_untangle(args) -> int:
    d = _load_diagram(args.file)
    res = SOLVERS[args.algo](d, args.k, **_caps(args))
    _emit(args, res.report(), _result_text(res))
    print(f"{res.answer} (k={args.k}, algo={args.algo}, nodes={res.nodes})", file=sys.stderr)
    return {"yes": YES, "no": NO}.get(res.answer, UNKNOWN)


def cmd_mindefect(args) -> int:
    d = _load_diagram(args.file)
    try:
        if args.jobs < 1:
            raise _Usage("--jobs must be at least 1")
        res = min_defect_result(d, args.kmax, args.algo, args.jobs, **_caps(args))
    except SearchLimitExceeded as exc:
        _err(str(exc))
        _emit(args, {"min_defect": None, "answer": "unknown"}, "unknown\n")
        return UNKNOWN
    if res is None:
        _emit(args, {"min_defect": None, "answer": "no"}, f"> {args.kmax}\n")
        return NO
    rep = res.report()
    rep["min_defect"] = res.k
    _emit(args, rep, f"{res.k}\n" + format_moves(res.witness))
    return YES


def cmd_random(args) -> int:
    if args.steps < 0:
        raise _Usage("--steps must be nonnegative")
    d = generate_random_unknot(args.seed, args.steps, mode=args.mode)
    text = serialize_diagram(d)
    _emit(args, {"seed": args.seed, "steps": args.steps, "crossings": d.n, "diagram": text}, text)
    return YES


def cmd_mas_solve(args) -> int:
    inst = _load_mas(args.file)
    best = min_axiom_set(inst)
    ok = len(best) <= inst.k
    _emit(args, {"min_axioms": len(best), "axioms": list(best), "k": inst.k, "answer": "yes" if ok else "no"},
          f"{len(best)} {' '.join(best)}\n".rstrip() + "\n")
    return YES if ok else NO


def _prepared(path: str):
    inst = preprocess(_load_mas(path))
    if inst.trivially_no:
        _err("preprocessing leaves a negative budget: trivial no-instance")
        return None
    return inst


def cmd_mas_reduce(args) -> int:
    inst = _prepared(args.file)
    if inst is None:
        return NO
    try:
        layout = build_reduction(inst)
    except MasError as exc:
        raise _Usage(str(exc)) from None
    _write(args.output, layout.knot_text())
    if args.atlas:
        _write(args.atlas, layout.atlas_text())
    summary = {"crossings": layout.diagram.n, "budget": 2 * inst.k,
               "sentences": list(inst.sentences), "atlas_entries": len(layout.atlas)}
    if args.output and args.output != "-":
        _emit(args, summary, f"{layout.diagram.n} crossings, defect budget {2 * inst.k}\n")
    else:
        print(f"{layout.diagram.n} crossings, defect budget {2 * inst.k}", file=sys.stderr)
    return YES


def cmd_mas_witness(args) -> int:
    inst = _prepared(args.file)
    if inst is None:
        return NO
    given = [a for a in args.axioms.replace(",", " ").split() if a]
    kept = [a for a in given if a in inst.sentences]
    if not is_axiom_set(inst, kept):
        _err(f"{' '.join(given) or '(none)'} is not an axiom set")
        return NO
    layout = build_reduction(inst)
    ms = witness_untangling(layout, kept)
    _write(args.output, format_moves(ms))
    print(f"{len(ms)} moves, defect {2 * len(kept)}", file=sys.stderr)
    return YES


def cmd_render(args) -> int:
    d = _load_diagram(args.file)
    _write(args.output, render_svg(d))
    return YES


# parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable report on stdout")
    caps = argparse.ArgumentParser(add_help=False)
    caps.add_argument("--max-nodes", type=int, default=None)
    caps.add_argument("--max-seconds", type=float, default=None)

    p = argparse.ArgumentParser(prog="knotdefect", description="Knot diagrams, Reidemeister moves "
                                "and defect-bounded untangling.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help, parents=()):
        sp = sub.add_parser(name, help=help, parents=[common, *parents])
        sp.set_defaults(fn=fn)
        return sp

    add("validate", cmd_validate, "check a .knot file").add_argument("file")
    add("faces", cmd_faces, "list faces").add_argument("file")
    sp = add("moves", cmd_moves, "enumerate feasible moves")
    sp.add_argument("file")
    sp.add_argument("--kinds", help="comma list, e.g. II-,III")
    for name, fn, help in (("apply", cmd_apply, "apply a move sequence"),
                           ("defect", cmd_defect, "defect of an untangling")):
        sp = add(name, fn, help)
        sp.add_argument("file")
        sp.add_argument("moves")
    sp = add("untangle", cmd_untangle, "decide untangling within defect k", [caps])
    sp.add_argument("file")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--algo", choices=["brute", "naive", "special"], default="special")
    sp = add("mindefect", cmd_mindefect, "smallest defect up to kmax", [caps])
    sp.add_argument("file")
    sp.add_argument("--kmax", type=int, required=True)
    sp.add_argument("--algo", choices=["brute", "naive", "special"], default="special")
    sp.add_argument("--jobs", type=int, default=1, help="budgets searched in parallel processes")
    sp = add("random", cmd_random, "random diagram of the unknot")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--steps", type=int, required=True)
    sp.add_argument("--mode", choices=["uniform", "local"], default="uniform")
    add("mas-solve", cmd_mas_solve, "minimum axiom set by brute force").add_argument("file")
    sp = add("mas-reduce", cmd_mas_reduce, "compile an instance into a diagram")
    sp.add_argument("file")
    sp.add_argument("-o", "--output", default=None)
    sp.add_argument("--atlas", default=None)
    sp = add("mas-witness", cmd_mas_witness, "untangling from an axiom set")
    sp.add_argument("file")
    sp.add_argument("--axioms", required=True, help="comma or space separated sentence names")
    sp.add_argument("-o", "--output", default=None)
    sp = add("render", cmd_render, "draw a diagram as SVG")
    sp.add_argument("file")
    sp.add_argument("-o", "--output", default=None)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else YES
    try:
        return args.fn(args)
    except _Usage as exc:
        _err(str(exc))
        return USAGE


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
