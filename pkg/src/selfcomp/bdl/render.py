"""Deterministic pretty-printer from a behavior store back to BDL."""

from __future__ import annotations

from collections.abc import Mapping

from ..behavior import Behavior, Composite, Step, default_step_name, unwrap


def _order(store: Mapping) -> list[str]:
    """Store order, moved only as far as needed to declare dependencies first.

    Nested behaviors must come first. A parent should, but a parent that
    nests its own descendant cannot, so that child is emitted without
    ``extends`` instead.
    """
    done: set[str] = set()
    out: list[str] = []

    def visit(name: str, active: frozenset) -> None:
        if name in done or name in active:
            return
        b = store[name]
        active = active | {name}
        for s in b.steps:
            if s.references and s.references in store:
                visit(s.references, active)
        if b.parent is not None and b.parent in store:
            visit(b.parent, active)
        if name not in done:
            done.add(name)
            out.append(name)

    for name in store:
        visit(name, frozenset())
    return out


def _stepref(step: Step) -> str:
    core = unwrap(step.payload)[1]
    if isinstance(core, Composite):
        text, default = f"behavior {core.behavior}", default_step_name(core.behavior)
    else:
        text, default = core.name, core.name
    if step.name != default:
        text += f" as {step.name}"
    return text


def _add_lines(step: Step) -> list[str]:
    lines = [f"add {_stepref(step)}"]
    wrappers = unwrap(step.payload)[0]
    # innermost wrapper is applied first
    lines.extend(f"map {step.name} with {w}" for w in reversed(wrappers))
    return lines


def render_behavior(b: Behavior, store: Mapping, declared=None) -> str:
    parent = store.get(b.parent) if b.parent is not None else None
    if parent is not None and parent.name != b.name and (declared is None or parent.name in declared):
        header = f"behavior {b.name} extends {b.parent}"
        base = list(parent.steps)
    else:
        header = f"behavior {b.name}"
        base = []
    common = 0
    while common < min(len(base), len(b.steps)) and base[common] == b.steps[common]:
        common += 1
    body = [f"delete {s.name}" for s in base[common:]]
    for s in b.steps[common:]:
        body.extend(_add_lines(s))
    if not body:
        return header + "\n"
    return header + " {\n" + "".join(f"    {line}\n" for line in body) + "}\n"


def render(store: Mapping) -> str:
    declared: set[str] = set()
    chunks = []
    for name in _order(store):
        chunks.append(render_behavior(store[name], store, declared))
        declared.add(name)
    return "\n".join(chunks)
