"""Command-line interface.

Exit codes: 0 success or certificate, 1 other arithmetic/precision error,
2 parse or usage error, 3 inconclusive, 4 relator violation, 5 cap exceeded.
All numbers in the JSON output are exact; rationals are strings.
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass
import json
import os
import sys

from . import wordexpr as W
from .errors import (
    CapExceeded,
    ExtensionError,
    MagnusError,
    ParseError,
    RelatorViolation,
)
from .extcheck import (
    EmbeddedPresentation,
    ExtensionSpec,
    amalgam_check,
    extend_presentation,
    free_base,
    strong_embedding_probe,
)
from .foxrank import beta1_sequence
from .magnus import Certificate, MagnusContext, certify_nontrivial, default_names, evaluate
from .pquot import DEFAULT_CAP, build_quotient
from .scalars import GF, QQ, Zmod, is_prime

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_PARSE = 2
EXIT_INCONCLUSIVE = 3
EXIT_RELATOR = 4
EXIT_CAP = 5

CAP_ENV = "QMAGNUS_CAP"


class UsageError(MagnusError, ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    p: int
    d: int | None = None
    levels: tuple = ()
    cap: int = DEFAULT_CAP
    seed: int = 0
    output: str | None = None

    def validate(self) -> "RunConfig":
        if self.p and not is_prime(self.p):
            raise UsageError(f"--p {self.p} is not prime")
        if any(n < 2 for n in self.levels):
            raise UsageError("levels must be >= 2")
        if any(b <= a for a, b in zip(self.levels, self.levels[1:])):
            raise UsageError("levels must be strictly increasing")
        if self.p and self.d and self.cap < self.p**self.d:
            raise UsageError(f"cap {self.cap} is below p^d = {self.p ** self.d}")
        return self


def default_cap() -> int:
    raw = os.environ.get(CAP_ENV)
    return int(raw) if raw else DEFAULT_CAP


def _levels(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise UsageError(f"bad level list {text!r}") from None


def _domain(args):
    if args.domain == "q" or (args.domain is None and not args.p):
        return QQ
    if not args.p:
        raise UsageError(f"domain {args.domain} needs --p")
    if args.domain == "zpk":
        return Zmod(args.p, args.k)
    return GF(args.p)


def _emit(obj, output: str | None = None) -> None:
    text = json.dumps(obj, indent=2) + "\n"
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# Commands. Each returns (exit code, JSON payload).


def cmd_eval(args):
    RunConfig(p=args.p or 0).validate()
    ast = W.parse(args.expr)
    names = default_names(ast, args.d)
    ctx = MagnusContext(len(names), args.degree, _domain(args), names)
    out = evaluate(ast, ctx).to_json()
    out = {"schema": "v1", "expr": args.expr, **out}
    return EXIT_OK, out


def cmd_certify(args):
    RunConfig(p=args.p or 0).validate()
    sched = _levels(args.schedule) if args.schedule else None
    res = certify_nontrivial(args.expr, d=args.d, domain=_domain(args), schedule=sched,
                             n_max=args.max_degree)
    code = EXIT_OK if isinstance(res, Certificate) else EXIT_INCONCLUSIVE
    return code, res.to_json()


def cmd_beta1(args):
    G = EmbeddedPresentation.load(args.presentation)
    cfg = RunConfig(G.p, G.ambient_rank, _levels(args.levels), args.cap).validate()
    done = []

    def progress(rec):
        done.append(rec)
        sys.stderr.write(json.dumps({"completed": rec.to_json()}) + "\n")

    try:
        rep = beta1_sequence(G.presentation, G.rho, G.p, cfg.levels,
                             ambient_rank=G.ambient_rank, cap=cfg.cap,
                             commutative=args.commutative, on_level=progress)
    except CapExceeded as exc:
        return EXIT_CAP, {
            "schema": "v1", "error": "cap-exceeded", "message": str(exc),
            "partial_size": exc.partial_size,
            "levels": [r.to_json() for r in done],
        }
    return EXIT_OK, rep.to_json()


def cmd_probe(args):
    G = EmbeddedPresentation.load(args.presentation)
    cfg = RunConfig(G.p, G.ambient_rank, _levels(args.levels), args.cap).validate()
    recs = strong_embedding_probe(G, cfg.levels, cap=cfg.cap)
    return EXIT_OK, {"schema": "v1", "levels": [r.to_json() for r in recs]}


def cmd_amalgam(args):
    G = EmbeddedPresentation.load(args.presentation)
    cfg = RunConfig(G.p, G.ambient_rank, (args.level,), args.cap).validate()
    rep = amalgam_check(G, args.H or [], args.B or [], args.A or [], args.level, cap=cfg.cap)
    return EXIT_OK, rep.to_json()


def cmd_extend(args):
    if args.base:
        base = EmbeddedPresentation.load(args.base)
    else:
        if not args.p:
            raise UsageError("extend needs --p or --base")
        base = free_base([g.strip() for g in args.generators.split(",")], args.p)
    RunConfig(base.p, base.ambient_rank).validate()
    if args.kind == "root":
        if args.m is None:
            raise UsageError("root extensions need --m")
        spec = ExtensionSpec("root", args.w, m=args.m, new_gens=(args.new_gen,))
    else:
        spec_obj = {"kind": "centralizer", "w": args.w, "k": args.k,
                    "lambdas": args.lam or []}
        if args.new_gens:
            spec_obj["new_gens"] = args.new_gens.split(",")
        spec = ExtensionSpec.from_json(spec_obj)
    G = extend_presentation(base, spec, max_level=args.max_level)
    return EXIT_OK, G.to_json()


def cmd_quotient_info(args):
    cfg = RunConfig(args.p, args.d, (args.n,), args.cap).validate()
    try:
        Q = build_quotient(cfg.p, cfg.d, args.n, cap=cfg.cap, commutative=args.commutative)
    except CapExceeded as exc:
        return EXIT_CAP, {"schema": "v1", "error": "cap-exceeded", "message": str(exc),
                          "partial_size": exc.partial_size}
    return EXIT_OK, Q.to_json()


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qmagnus", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def scalar_opts(sp):
        sp.add_argument("--expr", required=True)
        sp.add_argument("--p", type=int, default=0, help="prime; 0 means rationals")
        sp.add_argument("--domain", choices=("q", "fp", "zpk"))
        sp.add_argument("--k", type=int, default=1, help="precision for zpk")
        sp.add_argument("--d", type=int, help="number of ambient generators")

    sp = sub.add_parser("eval", help="Magnus image of a word")
    scalar_opts(sp)
    sp.add_argument("--degree", type=int, default=4, help="truncation bound N")
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("certify", help="certify a word nontrivial")
    scalar_opts(sp)
    sp.add_argument("--max-degree", type=int, default=16)
    sp.add_argument("--schedule", help="comma-separated truncation bounds")
    sp.set_defaults(func=cmd_certify)

    for name, func, help_ in (("beta1", cmd_beta1, "normalised H_1 along the chain"),
                              ("probe", cmd_probe, "strong embedding probe")):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("presentation")
        sp.add_argument("--levels", default="2,3")
        sp.add_argument("--cap", type=int, default=default_cap())
        sp.add_argument("--output")
        if name == "beta1":
            sp.add_argument("--commutative", action="store_true",
                            help="use the commutative (free abelian) chain")
        sp.set_defaults(func=func)

    sp = sub.add_parser("amalgam", help="augmentation ideal intersection test")
    sp.add_argument("presentation")
    sp.add_argument("--H", action="append", help="generator word of H (repeat)")
    sp.add_argument("--B", action="append", help="generator word of B (repeat)")
    sp.add_argument("--A", action="append", help="generator word of A (repeat)")
    sp.add_argument("--level", type=int, default=2)
    sp.add_argument("--cap", type=int, default=default_cap())
    sp.add_argument("--output")
    sp.set_defaults(func=cmd_amalgam)

    sp = sub.add_parser("extend", help="root or centralizer extension")
    sp.add_argument("kind", choices=("root", "centralizer"))
    sp.add_argument("--w", required=True)
    sp.add_argument("--m", type=int)
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--lambda", dest="lam", action="append",
                    help="exponent for a new generator, e.g. Zp(41;20)")
    sp.add_argument("--p", type=int)
    sp.add_argument("--base", help="presentation JSON to extend")
    sp.add_argument("--generators", default="a,b", help="free base when --base is absent")
    sp.add_argument("--new-gen", default="t")
    sp.add_argument("--new-gens")
    sp.add_argument("--max-level", type=int)
    sp.add_argument("--output")
    sp.set_defaults(func=cmd_extend)

    sp = sub.add_parser("quotient-info", help="order and generators of Q_n")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--cap", type=int, default=default_cap())
    sp.add_argument("--commutative", action="store_true")
    sp.add_argument("--output")
    sp.set_defaults(func=cmd_quotient_info)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code, payload = args.func(args)
    except (ParseError, UsageError, ExtensionError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PARSE
    except RelatorViolation as exc:
        _emit({"schema": "v1", "error": "relator-violation",
               "relator": str(exc.relator), "level": exc.level})
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_RELATOR
    except CapExceeded as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CAP
    except (MagnusError, KeyError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ERROR
    _emit(payload, getattr(args, "output", None))
    return code


if __name__ == "__main__":
    sys.exit(main())
