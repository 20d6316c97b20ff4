"""Command-line entry point.

Exit codes: 0 success, 1 a verification check failed, 2 usage error,
3 parameter outside the domain of the requested computation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import appell, evolution, probability, verify
from .fock import Params
from .series import format_rational, parse_rational

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _real(text: str) -> float:
    """Evaluation points: decimals or p/q."""
    try:
        return float(parse_rational(text)) if "/" in text else float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed number {text!r}") from None


def _nonneg(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed integer {text!r}") from None
    if n < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {n}")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="schrodinger-appell", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, *, beta=True, fmt=True):
        p.add_argument("--m", type=_rational, default=Fraction(1))
        p.add_argument("--c", type=_rational, default=Fraction(3, 4))
        if beta:
            p.add_argument("--beta", type=_rational, default=Fraction(1))
        if fmt:
            p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", choices=sorted(verify.SUITES) + ["all"], default="all")
    p.add_argument("--seed", type=_nonneg, default=0)
    p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("gram", help="Gram matrix of a weight block")
    common(p)
    p.add_argument("--cutoff", type=_nonneg, default=6)
    p.add_argument("--basis", choices=("jk", "ab"), default="jk")

    p = sub.add_parser("appell", help="canonical Appell polynomials psi_jk")
    common(p)
    p.add_argument("--order", type=_nonneg, default=4)

    p = sub.add_parser("evolve", help="heat-type Appell system h_ab(tau)")
    common(p, beta=False)
    p.add_argument("--a", type=_nonneg, default=0)
    p.add_argument("--b", type=_nonneg, default=0)
    p.add_argument("--tau", type=_rational, default=None)

    p = sub.add_parser("density", help="joint law of (X1, X2)")
    p.add_argument("--m", type=_rational, default=Fraction(1))
    p.add_argument("--beta", type=_rational, default=Fraction(1))
    p.add_argument("--c", type=_rational, default=Fraction(3, 2))
    p.add_argument("--format", choices=("json", "csv"), default=None)
    p.add_argument("--seed", type=_nonneg, default=0)
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--eval", nargs=2, type=_real, metavar=("X1", "X2"))
    mode.add_argument("--sample", type=int, metavar="N")
    mode.add_argument("--moments", nargs=2, type=_nonneg, metavar=("J", "K"))
    return parser


# -- serialization ------------------------------------------------------------


def _json(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _num(x: Fraction) -> dict:
    return {"value": format_rational(x), "decimal": float(x)}


# -- commands -----------------------------------------------------------------


def cmd_verify(args):
    report = verify.run_suite(args.suite, seed=args.seed)
    if args.format == "csv":
        rows = [(c.id, c.status, c.detail, c.anchor) for c in report.checks]
        return report.exit_status, _csv(("id", "status", "detail", "anchor"), rows)
    return report.exit_status, _json(report.to_json())


def cmd_gram(args):
    p = Params(args.m, args.c, args.beta)
    G = appell.gram_ab(p, args.cutoff) if args.basis == "ab" else appell.gram_jk(p, args.cutoff)
    label = ("a", "b") if args.basis == "ab" else ("j", "k")
    nonzero = [(s, t, G[s, t]) for s in G.states for t in G.states if G[s, t]]
    if args.format == "csv":
        rows = [(*s, *t, format_rational(v)) for s, t, v in nonzero]
        return EXIT_OK, _csv((label[0], label[1], label[0] + "'", label[1] + "'", "value"), rows)
    out = {
        "basis": args.basis,
        "params": _params_json(p),
        "cutoff": args.cutoff,
        "states": [list(s) for s in G.states],
        "diagonal": [{label[0]: s[0], label[1]: s[1], **_num(G[s, s])} for s in G.states],
        "off_diagonal_nonzero": sum(1 for s, t, _ in nonzero if s != t),
        "entries": [{"row": list(s), "col": list(t), "value": format_rational(v)} for s, t, v in nonzero],
    }
    return EXIT_OK, _json(out)


def cmd_appell(args):
    p = Params(args.m, args.c, args.beta)
    psi = appell.appell_polynomials(p, args.order)
    if args.format == "csv":
        rows = [
            (j, k, e1, e2, format_rational(c))
            for (j, k), f in sorted(psi.items())
            for (e1, e2), c in sorted(f.items())
        ]
        return EXIT_OK, _csv(("j", "k", "x1_power", "x2_power", "coefficient"), rows)
    out = {
        "params": _params_json(p),
        "order": args.order,
        "polynomials": [
            {
                "j": j,
                "k": k,
                "terms": [{"x1": e1, "x2": e2, "coefficient": format_rational(c)} for (e1, e2), c in sorted(f.items())],
            }
            for (j, k), f in sorted(psi.items())
        ],
    }
    return EXIT_OK, _json(out)


def cmd_evolve(args):
    p = Params(args.m, args.c)
    h = evolution.heat_appell(p, args.a, args.b)
    if args.format == "csv":
        rows = [
            (n, j, k, format_rational(c)) for n, v in enumerate(h.coeffs) for (j, k), c in sorted(v.items())
        ]
        return EXIT_OK, _csv(("tau_power", "j", "k", "coefficient"), rows)
    out = {"params": _params_json(p), **h.to_json()}
    if args.tau is not None:
        out["tau"] = format_rational(args.tau)
        out["at_tau"] = [
            {"j": j, "k": k, **_num(c)} for (j, k), c in sorted(h.at(args.tau).items())
        ]
    return EXIT_OK, _json(out)


def cmd_density(args):
    p = probability.DensityParams(args.m, args.beta, args.c)
    if args.eval is not None:
        x1, x2 = args.eval
        value = probability.density(p, x1, x2)
        if args.format == "csv":
            return EXIT_OK, _csv(("x1", "x2", "density"), [(repr(x1), repr(x2), repr(value))])
        return EXIT_OK, _json({"x1": x1, "x2": x2, "density": value})
    if args.sample is not None:
        if args.sample < 1:
            raise UsageError("--sample needs a positive count")
        xs = probability.sample(p, args.sample, args.seed)
        if args.format == "json":
            return EXIT_OK, _json({"seed": args.seed, "samples": xs.tolist()})
        return EXIT_OK, _csv(("x1", "x2"), [(repr(float(a)), repr(float(b))) for a, b in xs])
    J, K = args.moments
    rows = [(j, k, probability.exact_moment(p, j, k)) for j in range(J + 1) for k in range(K + 1)]
    if args.format == "csv":
        return EXIT_OK, _csv(("j", "k", "value", "decimal"), [(j, k, format_rational(v), float(v)) for j, k, v in rows])
    return EXIT_OK, _json({"params": _density_json(p), "moments": [{"j": j, "k": k, **_num(v)} for j, k, v in rows]})


def _params_json(p: Params) -> dict:
    return {"m": format_rational(p.m), "c": format_rational(p.c), "beta": format_rational(p.beta)}


def _density_json(p) -> dict:
    return {"m": format_rational(p.m), "beta": format_rational(p.beta), "c": format_rational(p.c)}


COMMANDS = {
    "verify": cmd_verify,
    "gram": cmd_gram,
    "appell": cmd_appell,
    "evolve": cmd_evolve,
    "density": cmd_density,
}


def run(argv) -> tuple:
    """Return (exit code, stdout text, stderr text)."""
    try:
        args = build_parser().parse_args(argv)
        code, text = COMMANDS[args.command](args)
        return code, text, ""
    except UsageError as exc:
        return EXIT_USAGE, "", f"usage error: {exc}\n"
    except (ValueError, ZeroDivisionError) as exc:
        return EXIT_DOMAIN, "", f"domain error: {exc}\n"


def main(argv=None) -> int:
    code, out, err = run(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
