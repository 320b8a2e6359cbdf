"""Sequential execution of a behavior over a frozen registry.

The behavior is resolved into a plan first, so every unresolved name fails
before any step runs. Each step's output is the next step's input; the first
StepError stops the run and is reported in the outcome rather than raised.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .behavior import Behavior, Group, Leaf, Wrap, flatten_names, plan
from .errors import StepError
from .registry import Primitive, Registry, Value


class Status(Enum):
    COMPLETED = "completed"
    ABORTED = "aborted"


@dataclass
class ExecOutcome:
    status: Status
    trace: list[str] = field(default_factory=list)
    result: Value = None
    failed_step: Optional[str] = None
    error: Optional[str] = None

    @property
    def completed(self) -> bool:
        return self.status is Status.COMPLETED

    def to_dict(self) -> dict:
        out = {"status": self.status.value, "trace": list(self.trace)}
        if self.completed:
            out["result"] = self.result
        else:
            out["failed_step"] = self.failed_step
            out["error"] = self.error
        return out


class _Abort(Exception):
    def __init__(self, step: str, error: StepError) -> None:
        self.step = step
        self.error = error


def _compile(node, registry: Registry, trace: list) -> Primitive:
    if isinstance(node, Leaf):
        prim = registry.lookup(node.primitive)

        def run_leaf(value, _step=node.step, _prim=prim):
            trace.append(_step)
            try:
                return _prim.apply(value)
            except StepError as e:
                raise _Abort(_step, e) from e

        return Primitive(node.step, run_leaf)
    if isinstance(node, Wrap):
        inner = _compile(node.inner, registry, trace)
        return registry.wrapper(node.wrapper).wrap(inner)
    assert isinstance(node, Group), node
    return Primitive(node.step, _pipeline([_compile(c, registry, trace) for c in node.children]))


def _pipeline(stages: list[Primitive]):
    def run(value):
        for stage in stages:
            value = stage.apply(value)
        return value

    return run


_EMPTY_LIST = object()


def exec_behavior(
    behavior: Behavior,
    registry: Registry,
    initial: Value = _EMPTY_LIST,
    store: Optional[Mapping] = None,
) -> ExecOutcome:
    """Run ``behavior`` on ``initial``, which defaults to the empty list.

    The registry is frozen on first use. Resolution errors (unknown
    primitive or wrapper, unresolved or cyclic composite) propagate as
    exceptions; step failures become an ABORTED outcome.
    """
    registry.freeze()
    if initial is _EMPTY_LIST:
        initial = []
    trace: list[str] = []
    run = _pipeline([_compile(node, registry, trace) for node in plan(behavior, store)])
    try:
        result = run(initial)
    except _Abort as abort:
        return ExecOutcome(Status.ABORTED, trace, failed_step=abort.step, error=str(abort.error))
    return ExecOutcome(Status.COMPLETED, trace, result=result)


def trace_of(behavior: Behavior, store: Optional[Mapping] = None) -> list[str]:
    """Step names a fully successful run would visit, without running it."""
    return flatten_names(behavior, store)
