"""Batch command-line front end.

Subcommands: ``check-proof``, ``eval``, ``countermodel``, ``translate``,
``selftest``.  Exit status is 0 for accepted/true/ok, 1 for
rejected/false/countermodel-found, 2 for usage or input errors.  Every
subcommand takes ``--machine`` for JSON output suitable for scripts.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import algebra, fasteval, frames, jsonio
from .errors import S5BKEError
from .kernel import check, parse_derivation, scheme_examples
from .search import SearchBounds, UnknownWithinBounds, enumerate_frames, find_countermodel
from .syntax import format_formula, parse


def _emit(args: argparse.Namespace, machine_obj: dict, text_lines: list[str]) -> None:
    if args.machine:
        print(json.dumps(machine_obj, indent=2))
    else:
        for line in text_lines:
            print(line)


def cmd_check_proof(args: argparse.Namespace) -> int:
    derivation = parse_derivation(Path(args.file).read_text(encoding="utf-8"))
    verdict = check(derivation)
    lines = []
    checked = len(derivation.lines) if verdict.accepted else verdict.first_failure[0]
    for idx in range(1, checked + 1):
        formula = format_formula(derivation.lines[idx - 1].formula)
        if not verdict.accepted and idx == checked:
            lines.append(f"line {idx}: FAIL {verdict.first_failure[1]}  {formula}")
        else:
            lines.append(f"line {idx}: ok  {formula}")
    if verdict.accepted:
        lines.append(f"accepted: {format_formula(derivation.conclusion)}")
        failure = None
    else:
        line_no, reason = verdict.first_failure
        lines.append(f"rejected at line {line_no}: {reason}")
        failure = {"line": line_no, "reason": reason}
    _emit(
        args,
        {
            "accepted": verdict.accepted,
            "first_failure": failure,
            "conclusion": format_formula(derivation.conclusion),
        },
        lines,
    )
    return 0 if verdict.accepted else 1


def _report_violations(args: argparse.Namespace, violations) -> int:
    _emit(
        args,
        {
            "valid": False,
            "violations": [
                {
                    "code": v.code,
                    "at": v.at,
                    "witnesses": list(v.witnesses),
                    "message": v.message,
                }
                for v in violations
            ],
        },
        [f"invalid model: {v.message}" for v in violations],
    )
    return 2


def cmd_eval(args: argparse.Namespace) -> int:
    obj = jsonio.load_path(args.file)
    formula = parse(args.formula)
    if args.kind == "algebra":
        if args.at is not None:
            raise ValueError("--at applies to frame models only")
        model, assignment = algebra.from_json(obj)
        violations = algebra.validate_algebra(model)
        if violations:
            return _report_violations(args, violations)
        denotation = algebra.eval_algebra(model, assignment, formula)
        world = model.true_point
        satisfied = bool((denotation >> world) & 1)
    else:
        km = frames.from_json(obj)
        violations = frames.validate_model(km)
        if violations:
            return _report_violations(args, violations)
        world = km.frame.designated if args.at is None else args.at
        if not 0 <= world < km.frame.world_count:
            raise ValueError(f"world {world} out of range")
        denotation = frames.denote(km, formula)
        satisfied = bool((denotation >> world) & 1)
    _emit(
        args,
        {"denotation": denotation, "world": world, "satisfied": satisfied},
        [
            f"denotation: {denotation}",
            f"world: {world}",
            f"satisfied: {'true' if satisfied else 'false'}",
        ],
    )
    return 0 if satisfied else 1


def cmd_countermodel(args: argparse.Namespace) -> int:
    goal = parse(args.goal)
    premises = [parse(p) for p in args.premise]
    bounds = SearchBounds(max_worlds=args.max_worlds, max_variables=args.max_variables)
    report = find_countermodel(premises, goal, bounds)
    if isinstance(report, UnknownWithinBounds):
        _emit(
            args,
            {
                "verdict": "unknown_within_bounds",
                "models_examined": report.models_examined,
            },
            [
                "no countermodel within bounds "
                f"({report.models_examined} models examined)"
            ],
        )
        return 0
    model_obj = frames.to_json(report.model)
    trace = list(report.trace)
    lines = ["countermodel found:"]
    lines.extend(jsonio.dumps(model_obj).rstrip("\n").splitlines())
    for w, value in enumerate(trace):
        lines.append(f"goal at world {w}: {'true' if value else 'false'}")
    _emit(args, {"verdict": "found", "model": model_obj, "trace": trace}, lines)
    return 1


def cmd_translate(args: argparse.Namespace) -> int:
    obj = jsonio.load_path(args.file)
    model, assignment = algebra.from_json(obj)
    violations = algebra.validate_algebra(model)
    if violations:
        return _report_violations(args, violations)
    km = algebra.algebra_to_frame(model, assignment)
    frame_obj = frames.to_json(km)
    verify_obj = None
    status = 0
    extra: list[str] = []
    if args.verify is not None:
        formula = parse(args.verify)
        on_algebra = algebra.satisfies_algebra(model, assignment, formula)
        on_frame = frames.models(km, formula)
        agree = on_algebra == on_frame
        verify_obj = {
            "formula": args.verify,
            "algebra": on_algebra,
            "frame": on_frame,
            "agree": agree,
        }
        extra.append(
            f"verify {args.verify!r}: algebra={str(on_algebra).lower()} "
            f"frame={str(on_frame).lower()} agree={str(agree).lower()}"
        )
        if not agree:
            status = 1
    if args.machine:
        print(json.dumps({"frame": frame_obj, "verify": verify_obj}, indent=2))
    else:
        sys.stdout.write(jsonio.dumps(frame_obj))
        for line in extra:
            print(line, file=sys.stderr)
    return status


def run_selftest() -> dict:
    """Exhaustive two-world suites; returns a machine-readable summary."""
    suites: dict[str, dict] = {}

    def record(name: str, checks: int, failures: int) -> None:
        suites[name] = {"checks": checks, "failures": failures}

    bounds = SearchBounds(max_worlds=2)

    # evidence coincides with identity to the top element
    theorem = parse("([]x) <-> (x == top)")
    checks = failures = 0
    for km in enumerate_frames(bounds, ["x"]):
        checks += 1
        if frames.denote(km, theorem) != km.frame.full_mask:
            failures += 1
    record("box-iff-identity-with-top", checks, failures)

    # all ten axiom schemes valid on every enumerated frame
    instances = list(scheme_examples().values())
    checks = failures = 0
    for km in enumerate_frames(bounds, ["x", "y"]):
        for instance in instances:
            checks += 1
            if frames.denote(km, instance) != km.frame.full_mask:
                failures += 1
    record("axiom-validity", checks, failures)

    # recursive satisfaction, bottom-up denotation, and the batched
    # kernels agree world by world
    samples = [
        parse(s)
        for s in (
            "x", "~x", "[]x", "K x", "B x", "K(x | ~x)", "[]~[]x",
            "x == top", "B x -> x", "K x -> x", "<>x", "B ~x",
        )
    ]
    model_list = list(enumerate_frames(bounds, ["x"]))
    batches = fasteval.batch_models(model_list, ["x"])
    checks = failures = 0
    for sample in samples:
        program = fasteval.compile_formula(sample, ("x",))
        offset = 0
        for batch in batches:
            dens = fasteval.eval_batch(program, batch)
            for row in range(len(batch)):
                km = model_list[offset + row]
                reference = frames.denote(km, sample)
                checks += 1
                if reference != int(dens[row]):
                    failures += 1
                    continue
                for w in range(km.frame.world_count):
                    if frames.satisfies_at(km, w, sample) != bool((reference >> w) & 1):
                        failures += 1
                        break
            offset += len(batch)
    record("two-path-agreement", checks, failures)

    passed = all(s["failures"] == 0 for s in suites.values())
    return {"passed": passed, "suites": suites}


def cmd_selftest(args: argparse.Namespace) -> int:
    summary = run_selftest()
    lines = []
    for name, result in summary["suites"].items():
        status = "ok" if result["failures"] == 0 else "FAIL"
        lines.append(
            f"{name}: {status} ({result['checks']} checks, "
            f"{result['failures']} failures)"
        )
    lines.append("selftest passed" if summary["passed"] else "selftest FAILED")
    _emit(args, summary, lines)
    return 0 if summary["passed"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="s5bke",
        description="Proof checking, model evaluation, and countermodel "
        "search for the modal-epistemic logic S5BKE.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-proof", help="check a derivation file")
    p.add_argument("file")
    p.add_argument("--machine", action="store_true")
    p.set_defaults(func=cmd_check_proof)

    p = sub.add_parser("eval", help="evaluate a formula on a model file")
    p.add_argument("--kind", choices=("algebra", "frame"), required=True)
    p.add_argument("file")
    p.add_argument("formula")
    p.add_argument("--at", type=int, default=None, help="world to test (frames)")
    p.add_argument("--machine", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("countermodel", help="search for a countermodel")
    p.add_argument("goal")
    p.add_argument("--premise", action="append", default=[], metavar="FORMULA")
    p.add_argument("--max-worlds", type=int, default=3)
    p.add_argument("--max-variables", type=int, default=3)
    p.add_argument("--machine", action="store_true")
    p.set_defaults(func=cmd_countermodel)

    p = sub.add_parser("translate", help="translate an algebraic model to a frame model")
    p.add_argument("file")
    p.add_argument("--verify", metavar="FORMULA", default=None)
    p.add_argument("--machine", action="store_true")
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("selftest", help="run the exhaustive two-world suites")
    p.add_argument("--machine", action="store_true")
    p.set_defaults(func=cmd_selftest)

    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (S5BKEError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
