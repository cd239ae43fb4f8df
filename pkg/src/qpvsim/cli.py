"""Command-line front end.

Exit codes: 0 on success, 1 for configuration problems, 2 when a simulated
round tries to construct a faster-than-light message.
"""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace
from pathlib import Path

from .harness import (
    ConfigError,
    Scenario,
    parse_scenario,
    render_report,
    run_scenario,
    theorem_layout,
)
from .protocol import ActorId, CausalityViolation, run_round
from .spacetime import Event


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise ConfigError(message)


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qpv-sim", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, trace: bool = False) -> None:
        p.add_argument("--config", metavar="PATH", help="scenario file (defaults apply if omitted)")
        p.add_argument("--seed", type=int, help="override the scenario seed")
        if trace:
            p.add_argument("--trace", action="store_true", help="print per-round trace lines")

    p_run = sub.add_parser("run", help="run the scenario with an honest prover")
    common(p_run, trace=True)
    p_run.set_defaults(fn=_cmd_run)

    p_attack = sub.add_parser("attack", help="run the scenario's attack strategy")
    common(p_attack, trace=True)
    p_attack.set_defaults(fn=_cmd_attack)

    p_thm = sub.add_parser("check-theorems", help="evaluate the geometric security predicates")
    common(p_thm)
    p_thm.set_defaults(fn=_cmd_check_theorems)

    p_diag = sub.add_parser("diagram", help="emit spacetime segments for one round")
    common(p_diag, trace=True)
    p_diag.set_defaults(fn=_cmd_diagram)

    return parser


def _load(args: argparse.Namespace) -> Scenario:
    if args.config is None:
        scenario = Scenario()
    else:
        try:
            text = Path(args.config).read_text()
        except OSError as e:
            raise ConfigError(f"cannot read config {args.config}: {e}") from None
        scenario = parse_scenario(text)
    if args.seed is not None:
        scenario = replace(scenario, seed=args.seed)
    return scenario


def _print_report(scenario: Scenario, trace: bool) -> None:
    report = run_scenario(scenario, keep_traces=trace)
    print(render_report(report), end="")
    if trace and report.traces is not None:
        for rt in report.traces:
            print(rt.render())


def _cmd_run(args: argparse.Namespace) -> int:
    scenario = replace(_load(args), strategy=None)
    _print_report(scenario, args.trace)
    return 0


def _cmd_attack(args: argparse.Namespace) -> int:
    scenario = _load(args)
    if scenario.strategy is None:
        raise ConfigError("attack requires a strategy in the config")
    _print_report(scenario, args.trace)
    return 0


def _fmt_event(e: Event) -> str:
    return f"({e.x!r}, {e.t!r})"


def _cmd_check_theorems(args: argparse.Namespace) -> int:
    scenario = _load(args)
    g = scenario.geometry
    lay = theorem_layout(g, scenario.scheme)

    def flag(v: bool) -> str:
        return str(v).lower()

    print(f"scheme = {scenario.scheme.value}")
    print(f"x_v1 = {g.x_v1!r}")
    print(f"x_v2 = {g.x_v2!r}")
    print(f"delta = {g.delta!r}")
    print(f"encode_a = {_fmt_event(lay.encode_events[0])}")
    print(f"encode_b = {_fmt_event(lay.encode_events[1])}")
    print(f"extract = {_fmt_event(lay.extract_event)}")
    print(f"intercept_a = {_fmt_event(lay.interception_events[0])}")
    print(f"intercept_b = {_fmt_event(lay.interception_events[1])}")
    print(f"theorem1_insecure = {flag(lay.theorem1_insecure)}")
    print(f"theorem2 = {flag(lay.predicates.theorem2)}")
    print(f"theorem3 = {flag(lay.predicates.theorem3)}")
    print(f"theorem4 = {flag(lay.predicates.theorem4)}")
    return 0


def _cmd_diagram(args: argparse.Namespace) -> int:
    scenario = _load(args)
    trace = run_round(scenario, 0)
    t_max = max(r.t for r in trace.records)
    positions: dict[ActorId, float] = {}
    g = scenario.geometry
    if scenario.strategy is None:
        positions = {ActorId.V1: g.x_v1, ActorId.V2: g.x_v2, ActorId.P: g.x_p}
    else:
        positions = {ActorId.V1: g.x_v1, ActorId.V2: g.x_v2,
                     ActorId.P1: g.x_p1, ActorId.P2: g.x_p2}
    for aid, x in positions.items():
        print(f"segment {x:.9f} 0.000000000 {x:.9f} {t_max:.9f} worldline:{aid.value}")
    for msg in trace.messages:
        label = f"msg:{msg.sender.value}->{msg.recipient.value}:{msg.label}"
        print(
            f"segment {msg.emit.x:.9f} {msg.emit.t:.9f} "
            f"{msg.arrive.x:.9f} {msg.arrive.t:.9f} {label}"
        )
    if args.trace:
        print(trace.render())
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except CausalityViolation as e:
        print(f"causality violation: {e}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        # The output consumer (head, less) went away; silence the interpreter's
        # final stdout flush too, then report the conventional SIGPIPE status.
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 141


if __name__ == "__main__":
    sys.exit(main())
