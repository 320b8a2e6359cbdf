"""``selfc``: lint, inspect, flatten and run behavior-definition files, and
reproduce the SLOC growth analysis.

Machine-readable results go to stdout as JSON; diagnostics go to stderr as
``file:line:col: severity[code]: message``. Exit status is 0 on success, 1
when there are error diagnostics or a run aborts, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from . import corpus
from .analysis import (
    GrowthRow,
    fit_exponential,
    growth_points,
    growth_total,
    read_growth_csv,
    to_dot,
    to_text_tree,
)
from .bdl import Module, StepRef, check_source, has_errors, lower, parse
from .behavior import BehaviorStore, flatten
from .errors import SelfCompError
from .executor import exec_behavior
from .registry import Registry, corpus_registry, is_value


class UsageError(Exception):
    pass


def _primitive_names(module: Module) -> list[str]:
    names = []
    for decl in module.decls:
        for r in getattr(decl, "refinements", ()):
            ref: Optional[StepRef] = r.stepref
            if ref is not None and not ref.composite:
                names.append(ref.name)
        for entry in getattr(decl, "entries", ()):
            if entry.value is not None:
                names.append(entry.value)
    return names


def _registry_for(module: Module, strict: bool) -> Registry:
    """Corpus primitives, plus a trace primitive for every name the file
    uses unless ``strict``."""
    return corpus_registry() if strict else corpus_registry(_primitive_names(module))


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _print_diagnostics(diagnostics, filename: str) -> None:
    for d in diagnostics:
        print(d.format(filename), file=sys.stderr)


def _load(path: str, strict: bool) -> tuple[Optional[BehaviorStore], Optional[Registry]]:
    """Parse and lower ``path``; on failure print diagnostics and return Nones."""
    source = _read(path)
    module, diagnostics = parse(source)
    if has_errors(diagnostics):
        _print_diagnostics(diagnostics, path)
        return None, None
    registry = _registry_for(module, strict)
    try:
        store = lower(module, registry)
    except SelfCompError as err:
        line, col = (err.span.line, err.span.column) if err.span else (1, 1)
        print(f"{path}:{line}:{col}: error[{err.code}]: {err.message}", file=sys.stderr)
        return None, None
    return store, registry


def _behavior(store: BehaviorStore, name: str):
    if name not in store:
        raise UsageError(f"no behavior named {name!r}; known: {', '.join(store)}")
    return store[name]


def _int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _emit(obj) -> None:
    print(json.dumps(obj))


# commands


def cmd_lint(args) -> int:
    source = _read(args.file)
    module, _ = parse(source)
    diagnostics = check_source(source, _registry_for(module, args.strict))
    _print_diagnostics(diagnostics, args.file)
    return 1 if has_errors(diagnostics) else 0


def cmd_tree(args) -> int:
    store, _ = _load(args.file, strict=False)
    if store is None:
        return 1
    sys.stdout.write(to_dot(store) if args.dot else to_text_tree(store))
    return 0


def cmd_flatten(args) -> int:
    store, _ = _load(args.file, args.strict)
    if store is None:
        return 1
    b = _behavior(store, args.behavior)
    try:
        pairs = flatten(b, store)
    except SelfCompError as err:
        print(f"{args.file}: error[{err.code}]: {err.message}", file=sys.stderr)
        return 1
    _emit([list(p) for p in pairs] if args.primitives else [step for step, _ in pairs])
    return 0


def _parse_input(text: str):
    try:
        value = json.loads(text)
    except json.JSONDecodeError:
        raise UsageError(f"--input must be an integer, quoted text or a JSON document, got {text!r}") from None
    if not is_value(value):
        raise UsageError("--input may only contain null, integers, text, lists and objects")
    return value


def cmd_exec(args) -> int:
    initial = _parse_input(args.input)
    store, registry = _load(args.file, args.strict)
    if store is None:
        return 1
    b = _behavior(store, args.behavior)
    try:
        outcome = exec_behavior(b, registry, initial, store)
    except SelfCompError as err:
        print(f"{args.file}: error[{err.code}]: {err.message}", file=sys.stderr)
        return 1
    if args.trace:
        _emit(outcome.trace)
    if not outcome.completed:
        print(f"{args.file}: error[StepError]: step {outcome.failed_step} failed: {outcome.error}", file=sys.stderr)
        return 1
    _emit(outcome.result)
    return 0


def _fit_record(points, levels) -> dict:
    try:
        fit = fit_exponential(points)
    except SelfCompError as err:
        raise UsageError(f"{err.code}: {err.message}") from None
    return fit.to_dict(levels)


def cmd_fit(args) -> int:
    try:
        rows = read_growth_csv(args.data)
    except (OSError, ValueError, KeyError) as e:
        raise UsageError(f"cannot read growth data {args.data}: {e}") from None
    _emit(_fit_record(growth_points(rows), args.project))
    print("note: r2 is computed on ln(y), the space the fit is made in", file=sys.stderr)
    return 0


def cmd_growth(args) -> int:
    parents, children, refine = args.parents, args.children, args.refine
    n = max(len(parents), len(children), len(refine))

    def stretch(values: list[int], flag: str) -> list[int]:
        if len(values) == 1:
            return values * n
        if len(values) != n:
            raise UsageError(f"{flag} needs 1 or {n} values, got {len(values)}")
        return values

    parents, children, refine = stretch(parents, "--parents"), stretch(children, "--children"), stretch(refine, "--refine")
    try:
        rows = [GrowthRow(i + 1, p, c, r) for i, (p, c, r) in enumerate(zip(parents, children, refine))]
    except ValueError as e:
        raise UsageError(str(e)) from None
    record = {
        "rows": [
            {"level": r.level, "parents": r.parents, "children": r.children,
             "refinement_sloc": r.refinement_sloc, "total": growth_total(r)}
            for r in rows
        ]
    }
    if len(rows) >= 2:
        record["fit"] = _fit_record(growth_points(rows), args.levels)
    _emit(record)
    return 0


def cmd_corpus(args) -> int:
    if args.action == "path":
        print(corpus.corpus_dir())
        return 0
    checks = corpus.verify()
    failed = 0
    for check in checks:
        status = "ok" if check.ok else "MISMATCH"
        print(f"{status:8} {check.feature}: {' '.join(check.actual)}")
        if not check.ok:
            failed += 1
            print(f"         expected: {' '.join(check.expected)}", file=sys.stderr)
    print(f"{len(checks) - failed}/{len(checks)} features match their golden traces")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="selfc", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def strict_flag(p):
        p.add_argument(
            "--strict", action="store_true",
            help="only accept the bundled corpus primitives instead of inventing trace primitives",
        )

    p = sub.add_parser("lint", help="report problems in a .bdl file")
    p.add_argument("file")
    strict_flag(p)
    p.set_defaults(func=cmd_lint)

    p = sub.add_parser("tree", help="print the derivation hierarchy")
    p.add_argument("file")
    p.add_argument("--dot", action="store_true", help="emit Graphviz DOT")
    p.set_defaults(func=cmd_tree)

    p = sub.add_parser("flatten", help="print a behavior's primitive step sequence")
    p.add_argument("file")
    p.add_argument("behavior")
    p.add_argument("--primitives", action="store_true", help="print [step, primitive] pairs")
    strict_flag(p)
    p.set_defaults(func=cmd_flatten)

    p = sub.add_parser("exec", help="run a behavior over trace primitives")
    p.add_argument("file")
    p.add_argument("behavior")
    p.add_argument("--input", default="[]", help="initial value as JSON (default: [])")
    p.add_argument("--trace", action="store_true", help="print the executed steps before the result")
    strict_flag(p)
    p.set_defaults(func=cmd_exec)

    p = sub.add_parser("fit", help="fit y = a*exp(b*x) to growth data (r2 on ln y)")
    p.add_argument("--data", required=True, help="CSV with level,parents,children,refinement_sloc")
    p.add_argument("--project", type=_int_list, default=[], help="levels to project, e.g. 4,5")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("growth", help="tabulate parents*children*refinement SLOC per level")
    p.add_argument("--parents", type=_int_list, required=True)
    p.add_argument("--children", type=_int_list, required=True)
    p.add_argument("--refine", type=_int_list, required=True)
    p.add_argument("--levels", type=_int_list, default=[], help="levels to project from the fit")
    p.set_defaults(func=cmd_growth)

    p = sub.add_parser("corpus", help="bundled corpus utilities")
    p.add_argument("action", choices=["verify", "path"])
    p.set_defaults(func=cmd_corpus)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"selfc: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
