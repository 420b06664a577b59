"""Command line front end.

Exit codes: 0 success, 1 domain failure, 2 parse failure, 3 budget exceeded.
"""
import argparse
import sys
from fractions import Fraction

from . import io
from .classes import validate_sequence
from .gale import FanError, cone_records, fan_of_sequence
from .mutation import MutationStep, mutate_seq
from .reduction import (BudgetExceeded, NormalFormError, markov_enumerate, normal_form,
                        to_rank_one)
from .svg import fan_svg
from .toric_geometry import (circumference_length, hj_expand, is_T, k_squared,
                             resolution_drop)
from .toric_system import ToricSystemError, contract, extract

OK, DOMAIN, PARSE, BUDGET = 0, 1, 2, 3


def _emit(obj, out):
    out.write(io.dumps(obj))


def _load_sequence(path):
    return io.parse_sequence(io.load_json(path))


def cmd_validate(args, out):
    seq = _load_sequence(args.file)
    diag = validate_sequence(seq)
    report = {
        "ok": diag["ok"],
        "n": diag["n"],
        "t": diag["t"],
        "checks": diag["checks"],
        "chi": diag["chi"],
        "failures": diag["failures"],
        "offending_pairs": [[i + 1, j + 1] for i, j in diag["bad_pairs"]],
        "delta": {str(i + 1): (io.rat(d) if d is not None else None)
                  for i, d in diag["delta"].items()},
    }
    _emit(report, out)
    return OK if diag["ok"] else DOMAIN


def cmd_mutate(args, out):
    seq = _load_sequence(args.file)
    diag = validate_sequence(seq)
    if not diag["ok"]:
        _emit({"error": "invalid sequence", "failures": diag["failures"]}, out)
        return DOMAIN
    if not 1 <= args.pos < len(seq):
        _emit({"error": f"position {args.pos} out of range 1..{len(seq) - 1}"}, out)
        return DOMAIN
    new = mutate_seq(seq, MutationStep(args.pos, args.dir))
    res = io.sequence_to_json(new)
    if len(new) == new[0].L.n:
        ts = extract(new)
        res["toric_system"] = io.ts_summary(ts, contract(ts))
    _emit(res, out)
    return OK


def cmd_fan(args, out):
    seq = _load_sequence(args.file)
    try:
        fan = fan_of_sequence(seq)
    except (FanError, ToricSystemError) as exc:
        _emit({"error": str(exc)}, out)
        return DOMAIN
    _emit(io.fan_to_json(fan), out)
    if args.svg:
        with open(args.svg, "w") as fh:
            fh.write(fan_svg(fan, cone_records(fan)))
    return OK


def cmd_reduce(args, out):
    seq = _load_sequence(args.file)
    diag = validate_sequence(seq)
    if not diag["ok"]:
        _emit({"error": "invalid sequence", "failures": diag["failures"]}, out)
        return DOMAIN
    fn = normal_form if args.target == "normal-form" else to_rank_one
    try:
        cert = fn(seq, budget=args.budget)
    except BudgetExceeded as exc:
        _emit(io.certificate_to_json(exc.certificate, partial=True), out)
        return BUDGET
    except NormalFormError as exc:
        _emit({"error": str(exc)}, out)
        return DOMAIN
    res = io.certificate_to_json(cert)
    if args.target == "rank-one":
        fan = fan_of_sequence(cert.normalized)
        res["fan"] = io.fan_to_json(fan)
    _emit(res, out)
    return OK


def cmd_markov(args, out):
    if args.max < 1:
        _emit({"error": "--max must be at least 1"}, out)
        return DOMAIN
    _emit({"bound": args.max, "triples": [list(t) for t in markov_enumerate(args.max)]}, out)
    return OK


def cmd_resolve(args, out):
    v, k = args.v, args.k
    try:
        exp = hj_expand(v, k)
    except ValueError as exc:
        _emit({"error": str(exc)}, out)
        return DOMAIN
    V = exp.volumes
    steps = [io.rat(Fraction((V[i] - V[i - 1] + 1) ** 2, V[i - 1] * V[i]))
             for i in range(1, len(V))]
    _emit({"v": v, "k": k, "bs": list(exp.bs), "volumes": list(V), "T": is_T(exp),
           "length": circumference_length(v, k), "self_intersections": [-b for b in exp.bs],
           "K2_drops": steps, "K2_drop": io.rat(resolution_drop(exp))}, out)
    return OK


def cmd_ksquare(args, out):
    d = io.load_json(args.file)
    if isinstance(d, dict) and "rays" in d:
        fan = io.parse_fan(d)
        if fan.winding != 1:
            _emit({"error": f"winding number {fan.winding}"}, out)
            return DOMAIN
        val = k_squared(fan.rays)
    else:
        seq = io.parse_sequence(d)
        try:
            val = k_squared(fan_of_sequence(seq).rays)
        except (FanError, ToricSystemError) as exc:
            _emit({"error": str(exc)}, out)
            return DOMAIN
    out.write(io.rat(val) + "\n")
    return OK


def build_parser():
    p = argparse.ArgumentParser(prog="exceptional-toric",
                                description="Exceptional sequences, toric systems and fans.")
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("validate", help="check a sequence file")
    s.add_argument("file")
    s.set_defaults(func=cmd_validate)
    s = sub.add_parser("mutate", help="apply one mutation")
    s.add_argument("file")
    s.add_argument("--pos", type=int, required=True, help="1-based position of the pair")
    s.add_argument("--dir", choices=["left", "right"], required=True)
    s.set_defaults(func=cmd_mutate)
    s = sub.add_parser("fan", help="Gale-dual fan of a sequence")
    s.add_argument("file")
    s.add_argument("--svg", help="also write an SVG picture here")
    s.set_defaults(func=cmd_fan)
    s = sub.add_parser("reduce", help="reduce to a normal form or to rank one")
    s.add_argument("file")
    s.add_argument("--target", choices=["normal-form", "rank-one"], default="normal-form")
    s.add_argument("--budget", type=int, default=None, help="maximal number of mutations")
    s.set_defaults(func=cmd_reduce)
    s = sub.add_parser("markov", help="Markov triples up to a bound")
    s.add_argument("--max", type=int, required=True)
    s.set_defaults(func=cmd_markov)
    s = sub.add_parser("resolve", help="resolution data of 1/v(1,k)")
    s.add_argument("--v", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.set_defaults(func=cmd_resolve)
    s = sub.add_parser("ksquare", help="exact K^2 of a fan or sequence file")
    s.add_argument("file")
    s.set_defaults(func=cmd_ksquare)
    return p


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except io.ParseError as exc:
        _emit({"error": f"parse error: {exc}"}, out)
        return PARSE
    except (io.DomainError, ValueError) as exc:
        _emit({"error": str(exc)}, out)
        return DOMAIN


if __name__ == "__main__":
    sys.exit(main())
