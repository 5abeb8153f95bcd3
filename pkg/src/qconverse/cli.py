"""Command-line front end.

Exit status is 0 on success, 1 when ``verify`` finds a failing property, and
2 on bad arguments, unreadable files or invalid inputs.
"""
import argparse
import json
import math
import sys

from . import bounds
from .divergence import hockey_stick, renyi_divergence
from .errors import QConverseError
from .exponent import OptimizerOptions, e0_channel, k_lambda, k_lambda_numeric
from .fileio import load_channel, load_operator
from .linalg import BipartiteOperator
from .verify import SUITES, run_suites


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _num(x):
    return format(float(x), ".17g")


def _matrix(op):
    return op.op if isinstance(op, BipartiteOperator) else op


def _bipartite(path):
    op = load_operator(path)
    if not isinstance(op, BipartiteOperator):
        raise _UsageError(f"{path}: expected a bipartite operator with dims [dA, dB]")
    return op


def _add_rate(p, required=True):
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--rate", type=float, help="rate in nats per channel use")
    g.add_argument("--rate-bits", type=float, help="rate in bits per channel use")


def _rate(args):
    return args.rate if args.rate is not None else args.rate_bits * math.log(2.0)


def build_parser():
    parser = _Parser(prog="qconverse", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("divergence", help="Renyi or hockey-stick divergence of two operators")
    p.add_argument("--rho", required=True)
    p.add_argument("--sigma", required=True)
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--hockey", action="store_true")
    p.add_argument("--gamma", type=float, default=1.0)

    p = sub.add_parser("k-lambda", help="K_lambda(A>B) in closed form, optionally by direct search")
    p.add_argument("--state", required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--numeric", action="store_true")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("e0", help="E0(s) of a channel for a given input state")
    p.add_argument("--channel", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--s", type=float, required=True)

    p = sub.add_parser("erasure-curve", help="fidelity bounds for the erasure channel, n = 1..n-max")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--d", type=int, required=True)
    _add_rate(p)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--method", choices=("renyi", "hockey", "both"), default="renyi")
    p.add_argument("--out")

    p = sub.add_parser("theorem1", help="slack of the fidelity/rate inequality for a code")
    p.add_argument("--channel", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--fidelity", type=float, required=True)
    _add_rate(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)

    p = sub.add_parser("verify", help="run the seeded property suites")
    p.add_argument("--suite", choices=("all",) + tuple(SUITES), default="all")
    p.add_argument("--seed", type=int, default=0)
    return parser


def _cmd_divergence(args, out):
    rho, sigma = _matrix(load_operator(args.rho)), _matrix(load_operator(args.sigma))
    if args.hockey:
        value = hockey_stick(rho, sigma, args.gamma)
    else:
        if args.lam is None:
            raise _UsageError("--lambda is required unless --hockey is given")
        value = renyi_divergence(rho, sigma, args.lam)
    print(_num(value), file=out)
    return 0


def _cmd_k_lambda(args, out):
    state = _bipartite(args.state)
    if args.numeric:
        print(f"# seed: {args.seed}", file=out)
    print(f"closed_form {_num(k_lambda(state, args.lam))}", file=out)
    if args.numeric:
        value = k_lambda_numeric(state, args.lam, OptimizerOptions(seed=args.seed))
        print(f"numeric {_num(value)}", file=out)
    return 0


def _cmd_e0(args, out):
    print(_num(e0_channel(load_channel(args.channel), _bipartite(args.input), args.s)), file=out)
    return 0


def _cmd_erasure_curve(args, out):
    if args.n_max < 1:
        raise _UsageError("--n-max must be >= 1")
    q = bounds.BoundQuery(args.n_max, _rate(args), args.p, args.d)
    text = bounds.curve_sweep(q, over_n=list(range(1, args.n_max + 1)), method=args.method).to_csv()
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        out.write(text)
    return 0


def _cmd_theorem1(args, out):
    slack = bounds.theorem1_slack(
        args.fidelity, args.n, _rate(args), args.lam,
        channel=load_channel(args.channel), rho_in=_bipartite(args.input),
    )
    print(_num(slack), file=out)
    return 0


def _cmd_verify(args, out):
    print(f"# suite: {args.suite} seed: {args.seed}", file=out)
    results = run_suites(args.suite, args.seed)
    for r in results:
        print(r.line(), file=out)
    failed = sum(not r.passed for r in results)
    print(f"# {len(results) - failed}/{len(results)} properties passed", file=out)
    return 1 if failed else 0


COMMANDS = {
    "divergence": _cmd_divergence,
    "k-lambda": _cmd_k_lambda,
    "e0": _cmd_e0,
    "erasure-curve": _cmd_erasure_curve,
    "theorem1": _cmd_theorem1,
    "verify": _cmd_verify,
}


def run(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args, out)
    except _UsageError as exc:
        print(f"qconverse: error: {exc}", file=err)
    except (OSError, json.JSONDecodeError, KeyError, QConverseError, ValueError) as exc:
        print(f"qconverse: error: {type(exc).__name__}: {exc}", file=err)
    return 2


def main():
    sys.exit(run())
