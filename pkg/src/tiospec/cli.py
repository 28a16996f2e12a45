"""Command line interface: ``tiospec <command> ...``.

Verdict commands exit 0 when the property holds, 1 when it fails and 2 when
a bound was exceeded or the input was rejected.
"""
from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

from . import analysis, game, oracle, textio, traces
from . import words as W
from .dot import to_dot
from .operators import COMPOSERS, OperatorError, mirror
from .tioa import ModelError, TIOA, validate_tioa

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    p = Path(path)
    if not p.exists():
        shipped = resources.files("tiospec") / "models" / f"{path}.tioa"
        if shipped.is_file():
            return shipped.read_text(encoding="utf-8")
        raise UsageError(f"no such file: {path}")
    return p.read_text(encoding="utf-8")


def load_automaton(ref: str) -> TIOA:
    """``path``, ``path:NAME``, ``-`` (stdin) or the name of a shipped model."""
    path, name = ref, None
    if ":" in ref and not Path(ref).exists():
        path, name = ref.rsplit(":", 1)
    spec = textio.parse_spec(_read(path))
    if name is not None:
        if name not in spec.automata:
            raise UsageError(f"{path} has no automaton {name}; found {', '.join(spec.automata) or 'none'}")
        return spec.automata[name]
    if len(spec.automata) != 1:
        raise UsageError(f"{path} holds {len(spec.automata)} automata; pick one with {path}:NAME")
    return next(iter(spec.automata.values()))


def _emit(args, payload: dict, text: str):
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _write_or_print(target: str | None, content: str):
    if target and target != "-":
        Path(target).write_text(content, encoding="utf-8")
    else:
        sys.stdout.write(content)


# -- commands ---------------------------------------------------------------

def cmd_validate(args) -> int:
    spec = textio.parse_spec(_read(args.file), validate=False)
    problems = {name: validate_tioa(a) for name, a in spec.automata.items()}
    bad = {k: v for k, v in problems.items() if v}
    lines = [f"{name}: {'ok' if not probs else '; '.join(probs)}" for name, probs in problems.items()]
    _emit(args, {"valid": not bad, "automata": problems}, "\n".join(lines) or "no automata")
    return EXIT_FAIL if bad else EXIT_OK


def cmd_compose(args) -> int:
    a0, a1 = load_automaton(args.left), load_automaton(args.right)
    result = COMPOSERS[args.op](a0, a1)
    _write_or_print(args.output, textio.format_tioa(result))
    return EXIT_OK


def cmd_mirror(args) -> int:
    _write_or_print(args.output, textio.format_tioa(mirror(load_automaton(args.automaton))))
    return EXIT_OK


def cmd_det(args) -> int:
    d = oracle.digitize(load_automaton(args.automaton), args.delta, args.horizon)
    det = oracle.determinize_explicit(d)
    payload = {
        "states_before": d.size(),
        "states_after": det.size(),
        "was_deterministic": d.is_deterministic(),
        "exact": d.exact,
        "system": det.to_json(),
    }
    text = (f"digitized: {d.size()} states ({'deterministic' if d.is_deterministic() else 'nondeterministic'}); "
            f"determinized: {det.size()} states")
    _emit(args, payload, text)
    return EXIT_OK


def _verdict(args, v: analysis.Verdict) -> int:
    _emit(args, v.to_json(), str(v))
    return v.exit_code()


def cmd_reach_bot(args) -> int:
    a = load_automaton(args.automaton)
    return _verdict(args, analysis.reach_bot(a, args.budget, args.depth, args.horizon))


def cmd_refine(args) -> int:
    spec, imp = load_automaton(args.spec), load_automaton(args.imp)
    return _verdict(args, analysis.refines(spec, imp, args.budget, args.depth, args.horizon))


def cmd_equiv(args) -> int:
    a, b = load_automaton(args.a), load_automaton(args.b)
    return _verdict(args, analysis.equivalent(a, b, args.budget, args.depth, args.horizon))


def cmd_traces(args) -> int:
    a = load_automaton(args.automaton)
    t = traces.extract_triple_traces(oracle.digitize(a, args.delta, args.horizon), args.depth, args.horizon)
    data = t.to_json()
    if args.json_out:
        Path(args.json_out).write_text(json.dumps(data, indent=2, sort_keys=True), encoding="utf-8")
    report = traces.structural_report(t)
    summary = {k: len(getattr(t, k)) for k in ("tt", "tr", "te", "tp", "tm")}
    payload = {"sizes": summary, "structure": {k: ok for k, (ok, _) in report.items()}, "traces": data}
    lines = [f"{k.upper()}: {n} words" for k, n in summary.items()]
    lines += [f"{name}: {'ok' if ok else 'violated by ' + W.to_text(cex)}" for name, (ok, cex) in report.items()]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if all(ok for ok, _ in report.values()) else EXIT_FAIL


def cmd_strategies(args) -> int:
    a = load_automaton(args.automaton)
    d = oracle.digitize(a, 1, args.horizon)
    found = game.enumerate_strategies(d, args.depth, args.horizon, args.budget)
    payload = game.strategy_set_json(found, automaton=a.name, depth=args.depth, horizon=args.horizon)
    text = "\n".join([f"{len(found)} strategies (depth {args.depth}, horizon {args.horizon})"]
                     + sorted(str(g) for g in found)[: args.show])
    _emit(args, payload, text)
    return EXIT_OK


def cmd_check_lemmas(args) -> int:
    bounds = game.Bounds(args.depth, args.horizon, args.budget)
    report = game.check_lemmas(args.corpus, args.seed, bounds)
    lines = [f"{name}: {'pass' if v['holds'] else 'FAIL'} ({v['cases']} cases, {v['checked']} checks)"
             for name, v in report["lemmas"].items()]
    lines.append(f"bounded universe: depth {args.depth}, horizon {args.horizon}; "
                 f"{report['skipped_over_budget']} cases over budget")
    _emit(args, report, "\n".join(lines))
    return EXIT_OK if report["holds"] else EXIT_FAIL


def cmd_dot(args) -> int:
    _write_or_print(args.output, to_dot(load_automaton(args.automaton), complete=args.complete))
    return EXIT_OK


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output on stdout")
    bounded = argparse.ArgumentParser(add_help=False)
    bounded.add_argument("--budget", type=int, default=analysis.DEFAULT_BUDGET)
    bounded.add_argument("--depth", type=int, default=None, help="bound on the number of actions")
    bounded.add_argument("--horizon", type=int, default=None, help="bound on elapsed time")

    p = argparse.ArgumentParser(prog="tiospec", description="Timed I/O specification toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common], help="parse and validate a file")
    s.add_argument("file")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("compose", parents=[common], help="combine two automata")
    s.add_argument("--op", choices=sorted(COMPOSERS), required=True)
    s.add_argument("left")
    s.add_argument("right")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_compose)

    s = sub.add_parser("mirror", parents=[common], help="swap inputs and outputs (and the sinks)")
    s.add_argument("automaton")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_mirror)

    s = sub.add_parser("det", parents=[common], help="digitize and determinize")
    s.add_argument("automaton")
    s.add_argument("--delta", default="1")
    s.add_argument("--horizon", type=int, default=12)
    s.set_defaults(func=cmd_det)

    s = sub.add_parser("reach-bot", parents=[common, bounded], help="is the error state reachable?")
    s.add_argument("automaton", nargs="?", default="-")
    s.set_defaults(func=cmd_reach_bot)

    s = sub.add_parser("refine", parents=[common, bounded], help="does IMP refine SPEC?")
    s.add_argument("spec")
    s.add_argument("imp")
    s.set_defaults(func=cmd_refine)

    s = sub.add_parser("equiv", parents=[common, bounded], help="mutual refinement")
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(func=cmd_equiv)

    s = sub.add_parser("traces", parents=[common], help="bounded triple-trace structure")
    s.add_argument("automaton")
    s.add_argument("--delta", default="1")
    s.add_argument("--depth", type=int, default=4)
    s.add_argument("--horizon", type=int, default=12)
    s.add_argument("--json-out", "--out", dest="json_out", metavar="FILE", help="write the structure as JSON")
    s.set_defaults(func=cmd_traces)

    s = sub.add_parser("strategies", parents=[common], help="enumerate bounded strategies")
    s.add_argument("automaton")
    s.add_argument("--depth", type=int, default=4)
    s.add_argument("--horizon", type=int, default=0)
    s.add_argument("--budget", type=int, default=game.DEFAULT_BUDGET)
    s.add_argument("--show", type=int, default=20, help="strategies to print in text mode")
    s.set_defaults(func=cmd_strategies)

    s = sub.add_parser("check-lemmas", parents=[common], help="bounded checks of the game lemmas")
    s.add_argument("--corpus", type=int, default=50)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--depth", type=int, default=2)
    s.add_argument("--horizon", type=int, default=1)
    s.add_argument("--budget", type=int, default=game.DEFAULT_BUDGET)
    s.set_defaults(func=cmd_check_lemmas)

    s = sub.add_parser("dot", parents=[common], help="Graphviz output")
    s.add_argument("automaton")
    s.add_argument("-o", "--output")
    s.add_argument("--complete", action="store_true", help="draw implicit completion edges")
    s.set_defaults(func=cmd_dot)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ModelError, OperatorError, textio.SpecSyntaxError, ValueError) as exc:
        if getattr(args, "json", False):
            print(json.dumps({"error": type(exc).__name__, "message": str(exc)}))
        else:
            print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
