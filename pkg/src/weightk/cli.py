"""``weightk`` command line.

Exit codes: 0 when every check passes, 1 when a mathematical identity fails, 2 on
malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path
from typing import Sequence

from weightk import komplex, motif
from weightk.classes import FunctorTag
from weightk.k0 import f_k0
from weightk.komplex import Complex
from weightk.corpus import Corpus, builtin_corpus_dir, load_corpus, load_file
from weightk.errors import IdentityFailure, InputError, MalformedExpression, SchemaError
from weightk.suites import SUITES, Entry, Report, RunConfig, run_suite

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("human", "json"), default="human")
    common.add_argument("--timings", action="store_true", help="include per-check timings")
    common.add_argument("--corpus", action="append", default=None, metavar="PATH",
                        help="extra corpus file or directory (repeatable)")
    common.add_argument("--config", default=None, help="run configuration JSON")

    p = argparse.ArgumentParser(prog="weightk", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("class", parents=[common], help="Grothendieck-group class of a variety")
    c.add_argument("file")
    c.add_argument("--mode", choices=("c", "m"), default="m", help="c: compact support, m: motive")

    h = sub.add_parser("khom", parents=[common], help="homology and weight complex of a matrix complex")
    h.add_argument("file")
    h.add_argument("--functor", action="append", default=None, metavar="TAG",
                   help="functor applied termwise: id, Q, Z/n (repeatable; default id)")

    e = sub.add_parser("euler", parents=[common], help="check E^n = F^(n+1) + G^n")
    e.add_argument("file")
    e.add_argument("--n", type=int, default=None, help="degree (default: all of 0..2d)")
    e.add_argument("--ell", type=int, default=None)

    w = sub.add_parser("wss", parents=[common], help="weight spectral sequence of a motive complex")
    w.add_argument("file")
    w.add_argument("--rational", action="store_true")

    k = sub.add_parser("check", parents=[common], help="corpus identity checks")
    k.add_argument("which", choices=("thm234",))
    k.add_argument("corpus_dir")

    n = sub.add_parser("count", parents=[common], help="point count versus the class specialization")
    n.add_argument("file")
    n.add_argument("--q", type=int, required=True)

    s = sub.add_parser("suite", parents=[common], help="run a named check suite")
    s.add_argument("name", help=f"one of {', '.join(SUITES + ('all',))}")
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--cases", type=int, default=None, help="cases per property check")
    return p


def _corpus(args) -> Corpus:
    return load_corpus([builtin_corpus_dir(), *(args.corpus or [])])


def _expr(args):
    corpus, kind, entry = load_file(args.file, _corpus(args))
    if kind not in ("expression", "atom"):
        raise MalformedExpression(f"{args.file} holds a {kind}, not a variety expression")
    return corpus, entry


def _emit(args, report: Report) -> int:
    print(report.render(args.format, args.timings))
    return EXIT_OK if report.ok else EXIT_FAIL


def _emit_value(args, name: str, payload: dict, text: str) -> int:
    if args.format == "json":
        print(json.dumps({"name": name, **payload}, indent=2, sort_keys=True))
    else:
        print(text)
    return EXIT_OK


def cmd_class(args) -> int:
    corpus, expr = _expr(args)
    mode = "compact_support" if args.mode == "c" else "motive"
    cls = motif.class_of(expr, corpus.atoms, mode)
    return _emit_value(args, "class", {"mode": mode, "class": cls.render(), "dim": cls.dim},
                       f"[{mode}] {cls.render()}")


def load_complex(path: str) -> Complex:
    p = Path(path)
    if not p.is_file():
        raise SchemaError(p, "path", "no such file")
    try:
        data = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(p, "json", str(exc)) from None
    if not isinstance(data, dict) or "terms" not in data:
        raise SchemaError(p, "terms", "missing")
    try:
        return Complex.from_json(data)
    except (ValueError, TypeError, KeyError) as exc:
        raise SchemaError(p, "complex", str(exc)) from None


def cmd_khom(args) -> int:
    C = load_complex(args.file)
    tags = [FunctorTag.parse(t) for t in (args.functor or ["id"])]
    W = komplex.weight_complex(C)
    s = W.support
    payload = {
        "ring": C.ring.name,
        "ranks": {str(i): C.rank(i) for i in C.degrees()},
        "weight_complex": {str(i): W.rank(i) for i in W.degrees()},
        "weight_support": list(s) if s else None,
        "contractible": W.is_zero(),
        "homology": {str(t): {str(i): str(komplex.functor_homology(C, t, i)) for i in C.degrees()}
                     for t in tags},
    }
    if C.ring.is_integers:
        payload["f_k0"] = {str(t): f_k0(C, t).render() for t in tags}
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
        return EXIT_OK
    lines = [f"ring {payload['ring']}",
             "ranks " + " ".join(f"{i}:{r}" for i, r in payload["ranks"].items()),
             "weight complex " + (" ".join(f"{i}:{r}" for i, r in payload["weight_complex"].items()) or "0"),
             f"weight support {s[0]}..{s[1]}" if s else "weight support empty",
             f"contractible {'yes' if payload['contractible'] else 'no'}"]
    for t in tags:
        hs = payload["homology"][str(t)]
        lines.append(f"H({t}) " + (" ".join(f"{i}:{m}" for i, m in hs.items()) or "0"))
        if "f_k0" in payload:
            lines.append(f"f_k0({t}) {payload['f_k0'][str(t)]}")
    print("\n".join(lines))
    return EXIT_OK


def cmd_euler(args) -> int:
    corpus, expr = _expr(args)
    ell = args.ell if args.ell is not None else RunConfig.load(args.config).ell
    d = expr.dim(corpus.atoms)
    ns = range(0, 2 * d + 1) if args.n is None else [args.n]
    r = Report()
    for n in ns:
        c = motif.euler_identity_check(expr, corpus.atoms, n, ell)
        r.add(Entry(f"euler.n{n:02d}", "pass" if c.ok else "fail", c.lhs, c.rhs, c.detail))
    return _emit(args, r)


def cmd_wss(args) -> int:
    _, kind, N = load_file(args.file, _corpus(args))
    if kind != "complex":
        raise InputError(f"{args.file} holds a {kind}, not a motive complex")
    ss = motif.weight_ss(N, args.rational)
    if args.format == "json":
        fmt = lambda M: motif._fmt(M, args.rational)  # noqa: E731
        payload = {
            "E1": {f"{p},{q}": fmt(M) for (p, q), M in sorted(ss.E1.items())},
            "E2": {f"{p},{q}": fmt(M) for (p, q), M in sorted(ss.E2.items())},
            "abutment": {str(n): fmt(M) for n, M in sorted(ss.abutment.items())},
            "degenerate": ss.degenerate,
        }
        print(json.dumps(payload, indent=2))
    else:
        print(ss.render())
    return EXIT_OK if ss.degenerate else EXIT_FAIL


def cmd_check(args) -> int:
    cfg = _config(args)
    corpus = load_corpus([args.corpus_dir, *(args.corpus or [])])
    return _emit(args, run_suite("thm234", cfg, corpus))


def cmd_count(args) -> int:
    corpus, expr = _expr(args)
    if args.q < 2:
        raise InputError("q must be at least 2")
    count = motif.point_count(expr, corpus.atoms, args.q)
    r = Report()
    r.add(Entry("count.point_count", "pass", str(count)))
    cls = motif.class_of(expr, corpus.atoms, "compact_support")
    if motif.is_cellular(expr, corpus.atoms):
        spec = motif.lefschetz_specialize(cls, args.q)
        r.add(Entry("count.specialization", "pass" if spec == count else "fail", str(spec), str(count)))
    else:
        r.add(Entry("count.specialization", "skip", detail="not torsion-free cellular"))
    return _emit(args, r)


def _config(args) -> RunConfig:
    cfg = RunConfig.load(args.config)
    if getattr(args, "seed", None) is not None:
        cfg = replace(cfg, seed=args.seed)
    if getattr(args, "cases", None) is not None:
        if args.cases < 1:
            raise InputError("--cases must be >= 1")
        cfg = cfg.with_cases(args.cases)
    if args.corpus:
        cfg = replace(cfg, corpus=tuple(cfg.corpus_paths()) + tuple(args.corpus))
    return cfg


def cmd_suite(args) -> int:
    return _emit(args, run_suite(args.name, _config(args)))


COMMANDS = {"khom": cmd_khom, "class": cmd_class, "euler": cmd_euler, "wss": cmd_wss, "check": cmd_check,
            "count": cmd_count, "suite": cmd_suite}


def main(argv: Sequence[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except IdentityFailure as exc:
        print(f"identity failed: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
