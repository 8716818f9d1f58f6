"""Command-line front end: build, transform, eval, check, axioms, enumerate, bench.

Exit codes: 0 success (and in-class for ``check``), 1 not-in-class, 2 bad
input or usage.  All stdout output is deterministic for fixed inputs and
flags; progress and statistics go to stderr.
"""

from __future__ import annotations

import argparse
import sys
import time

from . import catalog, transforms
from .core import Matroid, MatroidError, validate_axioms
from .engine import Family, SearchConfig, evaluate, membership
from .fileio import (FormatError, format_elements, parse_elements, parse_matroid,
                     write_certificate, write_matroid)

BUILDERS = ("uniform", "fano", "nonfano", "kinser-base", "kinser",
            "kinser-relaxed", "spike", "dowling")


def _load(path: str) -> Matroid:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_matroid(fh.read())


def _save(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def parse_set_spec(M: Matroid, token: str) -> int:
    """One family set: '-', a comma list of elements, or '@Part+Part' layout refs."""
    token = token.strip()
    if token.startswith("@"):
        return M.parts(*token[1:].split("+"))
    return parse_elements(token)


def _build(args) -> int:
    name = args.name
    if name == "uniform":
        M = catalog.uniform(args.k, args.m)
    elif name == "fano":
        M = catalog.fano_pair()[0]
    elif name == "nonfano":
        M = catalog.fano_pair()[1]
    elif name == "kinser-base":
        M = catalog.kinser_base(args.r)
    elif name == "kinser":
        M = catalog.kinser(args.r)
    elif name == "kinser-relaxed":
        M = catalog.kinser_relaxed(args.r, args.also_relax)
    elif name == "spike":
        M = catalog.binary_spike(args.r)
    else:
        if not args.group.startswith("z"):
            raise MatroidError(f"unknown group {args.group!r}; use zN for cyclic")
        M = catalog.dowling(catalog.cyclic_group(int(args.group[1:])), args.n)
    text = write_matroid(M)
    if args.output:
        _save(args.output, text)
    else:
        sys.stdout.write(text)
    return 0


def _transform(args) -> int:
    M = _load(args.input)
    op = args.op
    if op == "dual":
        out = transforms.dual(M)
    elif op == "delete":
        out, _ = transforms.delete(M, args.element)
    elif op == "contract":
        out, _ = transforms.contract(M, args.element)
    elif op == "minor":
        out, _ = transforms.minor(M, parse_set_spec(M, args.delete),
                                  parse_set_spec(M, args.contract))
    elif op == "relax":
        out = transforms.relax(M, parse_set_spec(M, args.set))
    elif op == "tighten":
        out = transforms.tighten(M, parse_set_spec(M, args.set))
    elif op == "truncate":
        out = transforms.truncate(M)
    else:  # direct-sum
        other = _load(args.second)
        out, _, _ = transforms.direct_sum(M, other)
    text = write_matroid(out)
    if args.output:
        _save(args.output, text)
    else:
        sys.stdout.write(text)
    return 0


def _eval(args) -> int:
    M = _load(args.input)
    sets = tuple(parse_set_spec(M, tok) for tok in args.family.split(";"))
    value = evaluate(M, Family(len(sets), sets))
    print(f"matroid {M.label or '?'}")
    print(f"n {len(sets)}")
    print(f"lhs {value.lhs}")
    print(f"rhs {value.rhs}")
    print(f"satisfied {'true' if value.satisfied else 'false'}")
    for t in value.terms:
        print(f"term {t.side} {t.kind} X{'+X'.join(str(i) for i in t.members)} "
              f"rank={t.rank} set={format_elements(t.mask)}")
    return 0


def _check(args) -> int:
    M = _load(args.input)
    if args.dual:
        M = transforms.dual(M)
    cfg = SearchConfig(space=("all_subsets" if args.space == "all" else "flats"),
                       determinism=args.mode,
                       symmetry_pruning=not args.no_prune,
                       parallel_width=args.parallel)
    t0 = time.perf_counter()
    verdict = membership(M, args.n, cfg)
    elapsed = time.perf_counter() - t0
    print(f"search statistics: tuples={verdict.tuples_examined} "
          f"rank_queries={verdict.rank_queries} seconds={elapsed:.2f}",
          file=sys.stderr)
    if verdict.in_class:
        print(f"in-class n={args.n} matroid={M.label or '?'}")
        return 0
    cert = verdict.certificate
    print(f"not-in-class n={args.n} matroid={M.label or '?'} "
          f"lhs={cert.lhs} rhs={cert.rhs}")
    if args.output:
        _save(args.output, write_certificate(cert))
    return 1


def _axioms(args) -> int:
    M = _load(args.input)
    if args.which == "circuits":
        nonspanning = [c for c in M.enumerate("circuits")
                       if M.rank(c) < M.rank_total]
        res = validate_axioms((M.m, nonspanning), "circuits")
    else:
        res = validate_axioms(M, args.which)
    if res.ok:
        print(f"ok {args.which}")
        return 0
    witness = ",".join(f"{w:#x}" if isinstance(w, int) else str(w)
                       for w in (res.witness or ()))
    print(f"violation {res.axiom} witness {witness}: {res.message}")
    return 1


def _enumerate(args) -> int:
    M = _load(args.input)
    masks = M.enumerate(args.kind)
    for x in masks:
        print(format_elements(x))
    print(f"count {len(masks)}", file=sys.stderr)
    return 0


def _bench(args) -> int:
    lo, _, hi = args.spike_range.partition("..")
    lo, hi = int(lo), int(hi or lo)
    print("r,elements,circuit_hyperplanes,rank_queries_ingleton_check,seconds")
    for r in range(lo, hi + 1):
        if r % 2:
            continue
        M = catalog.binary_spike(r)
        # the 2^{r-1} transversal circuit-hyperplanes: the relaxation
        # candidates an inequality oracle is forced to probe
        chs = sum(1 for z in catalog.spike_transversals(r, "even")
                  if M.classify(z).circuit_hyperplane)
        t0 = time.perf_counter()
        verdict = membership(M, 4, SearchConfig(parallel_width=args.parallel))
        elapsed = time.perf_counter() - t0
        if not verdict.in_class:
            raise MatroidError(f"Z_{r} unexpectedly violates inequality 4")
        print(f"{r},{M.m},{chs},{verdict.rank_queries},{elapsed:.3f}")
        sys.stdout.flush()
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kinser",
                                 description="Exact matroid computations and "
                                             "Kinser inequality checking")
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="construct a catalog matroid")
    b.add_argument("name", choices=BUILDERS)
    b.add_argument("--k", type=int, default=0, help="uniform rank")
    b.add_argument("--m", type=int, default=1, help="uniform ground size")
    b.add_argument("--r", type=int, default=4, help="kinser/spike rank")
    b.add_argument("--also-relax", type=int, default=None,
                   help="second relaxed part index for kinser-relaxed")
    b.add_argument("--group", default="z2", help="dowling group, zN for cyclic")
    b.add_argument("--n", type=int, default=3, help="dowling vertex count")
    b.add_argument("-o", "--output", default=None)
    b.set_defaults(func=_build)

    t = sub.add_parser("transform", help="apply a matroid operation")
    t.add_argument("op", choices=("dual", "delete", "contract", "minor", "relax",
                                  "tighten", "truncate", "direct-sum"))
    t.add_argument("-i", "--input", required=True)
    t.add_argument("-o", "--output", default=None)
    t.add_argument("--element", type=int, default=0)
    t.add_argument("--set", default="-", help="subset: elements or @Part+Part")
    t.add_argument("--delete", default="-", help="minor deletion set")
    t.add_argument("--contract", default="-", help="minor contraction set")
    t.add_argument("--with", dest="second", default=None, help="second operand file")
    t.set_defaults(func=_transform)

    e = sub.add_parser("eval", help="evaluate inequality n for a family")
    e.add_argument("-n", type=int, required=True)
    e.add_argument("--family", required=True,
                   help="semicolon-separated sets, e.g. '0,1;2,3;@V3;-'")
    e.add_argument("-i", "--input", required=True)
    e.set_defaults(func=_eval)

    c = sub.add_parser("check", help="decide Kinser class membership")
    c.add_argument("-n", type=int, required=True)
    c.add_argument("-i", "--input", required=True)
    c.add_argument("--dual", action="store_true", help="check the dual matroid")
    c.add_argument("--space", choices=("flats", "all"), default="flats")
    c.add_argument("--mode", choices=("lex_first", "any"), default="lex_first")
    c.add_argument("--no-prune", action="store_true")
    c.add_argument("--parallel", type=int, default=1)
    c.add_argument("-o", "--output", default=None, help="certificate file")
    c.set_defaults(func=_check)

    a = sub.add_parser("axioms", help="validate axiom families on a matroid file")
    a.add_argument("-i", "--input", required=True)
    a.add_argument("--which", choices=("rank", "closure", "circuits", "independence"),
                   default="rank")
    a.set_defaults(func=_axioms)

    en = sub.add_parser("enumerate", help="list flats, circuits, bases, ...")
    en.add_argument("--kind", choices=("flats", "circuits", "bases", "hyperplanes",
                                       "circuit_hyperplanes"), required=True)
    en.add_argument("-i", "--input", required=True)
    en.set_defaults(func=_enumerate)

    be = sub.add_parser("bench", help="spike query-count benchmark (CSV on stdout)")
    be.add_argument("--spike-range", default="4..6", help="even ranks lo..hi, 4..8")
    be.add_argument("--parallel", type=int, default=1)
    be.set_defaults(func=_bench)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        if args.command == "bench":
            lo, _, hi = args.spike_range.partition("..")
            if not (4 <= int(lo) <= int(hi or lo) <= 8):
                raise MatroidError("spike range must lie within 4..8")
        if args.command == "transform" and args.op == "direct-sum" and not args.second:
            raise MatroidError("direct-sum needs --with FILE")
        return args.func(args)
    except (MatroidError, FormatError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
