"""Command-line front end.

    cavityborn compile --weights 3,2 [--omega 1 --epsilon 0 --idle-rate 0] [-o FILE]
    cavityborn run --schedule FILE --state FILE [-o FILE] [--trace FILE]
    cavityborn verify [--schedule FILE] --weights 3,2
    cavityborn probs --weights 3,2
    cavityborn analyze-stability --alpha RE,IM --beta RE,IM [--tol 1e-9]

Reports go to stdout, errors to stderr.  Exit status is 0 only when every
check passes.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .compiler import Weights, compile
from .executor import run
from .textio import dump_state, format_trace, parse_schedule, parse_state, serialize_schedule
from .twostate import ChannelParams, TwoStateMatrix, stability_verdict
from .verify import VerificationError, protocol_probabilities, verify_schedule


def _complex(text: str) -> complex:
    try:
        re, im = (float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected RE,IM, got {text!r}") from None
    return complex(re, im)


def _weights(text: str) -> Weights:
    try:
        return Weights.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _device_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--omega", type=float, default=1.0, help="hopping rate (default 1)")
    p.add_argument("--epsilon", type=float, default=0.0, help="on-site phase rate (default 0)")
    p.add_argument("--idle-rate", type=float, default=0.0, help="phase rate of disconnected cavities (default 0)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cavityborn", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", help="compile weights into a schedule file")
    p.add_argument("--weights", type=_weights, required=True)
    p.add_argument("--cavities", type=int, default=None, help="device size C (default N+1)")
    _device_flags(p)
    p.add_argument("-o", "--output", default=None)

    p = sub.add_parser("run", help="execute a schedule on a state dump")
    p.add_argument("--schedule", required=True)
    p.add_argument("--state", required=True)
    p.add_argument("-o", "--output", default=None, help="final state dump (default stdout)")
    p.add_argument("--trace", default=None, help="trace file (default stderr)")

    p = sub.add_parser("verify", help="run all endpoint checks")
    p.add_argument("--weights", type=_weights, required=True)
    p.add_argument("--schedule", default=None, help="schedule file (default: compile from weights)")
    p.add_argument("--tol", type=float, default=1e-9)
    _device_flags(p)

    p = sub.add_parser("probs", help="probabilities obtained from the protocol")
    p.add_argument("--weights", type=_weights, required=True)
    _device_flags(p)

    p = sub.add_parser("analyze-stability", help="classify a symmetric 2x2 evolution step")
    p.add_argument("--alpha", type=_complex, required=True)
    p.add_argument("--beta", type=_complex, required=True)
    p.add_argument("--tol", type=float, default=1e-9)
    return parser


def _params(args) -> ChannelParams:
    return ChannelParams(args.epsilon, args.omega)


def _cmd_compile(args) -> int:
    schedule = compile(args.weights, _params(args), cavities=args.cavities, idle_rate=args.idle_rate)
    _write(serialize_schedule(schedule), args.output)
    return 0


def _cmd_run(args) -> int:
    schedule = parse_schedule(Path(args.schedule).read_text())
    dev = schedule.device
    state = parse_state(Path(args.state).read_text(), dev.cavities, dev.internals)
    result = run(schedule, state)
    _write(dump_state(result.state), args.output)
    trace = format_trace(result)
    if args.trace is None:
        sys.stderr.write(trace)
    else:
        Path(args.trace).write_text(trace)
    return 0


def _cmd_verify(args) -> int:
    if args.schedule is None:
        schedule = compile(args.weights, _params(args), idle_rate=args.idle_rate)
    else:
        schedule = parse_schedule(Path(args.schedule).read_text())
    checks = verify_schedule(schedule, args.weights, tol=args.tol)
    for check in checks:
        print(check.report())
    return 0 if all(checks) else 1


def _cmd_probs(args) -> int:
    probs = protocol_probabilities(args.weights, _params(args), idle_rate=args.idle_rate)
    for s, p in enumerate(probs):
        print(f"A{s} {p:.12g}")
    return 0


def _cmd_stability(args) -> int:
    verdict = stability_verdict(TwoStateMatrix(args.alpha, args.beta), args.tol)
    plus, minus = verdict.eigenvalue_magnitudes
    norm_res, cross_res = verdict.unitarity_residuals
    print("stable" if verdict.stable else "unstable")
    print(f"eigenvalue_magnitudes {plus:.12g} {minus:.12g}")
    print(f"unitarity_residuals {norm_res:.12g} {cross_res:.12g}")
    return 0 if verdict.stable else 1


COMMANDS = {
    "compile": _cmd_compile,
    "run": _cmd_run,
    "verify": _cmd_verify,
    "probs": _cmd_probs,
    "analyze-stability": _cmd_stability,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (OSError, ValueError, VerificationError) as exc:
        print(f"cavityborn {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
