"""A before-advice-only aspect baseline for comparing against behaviors.

An aspect here is just an ordered list of primitives run before a target
function. Applying one produces a flat behavior, which lets the baseline be
compared trace-for-trace with a behavior built by inheritance.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from typing import Optional

from ..behavior import Behavior, Step, flatten_names
from ..errors import EmptyAdvice, UnknownPrimitive
from ..registry import Registry


@dataclass(frozen=True)
class Aspect:
    name: str
    advice: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "advice", tuple(self.advice))
        if not self.advice:
            raise EmptyAdvice(f"aspect {self.name!r} has no advice")


def apply_before_advice(
    aspect: Aspect,
    target: str,
    registry: Optional[Registry] = None,
    name: Optional[str] = None,
) -> Behavior:
    """Behavior running the aspect's advice, then ``target``.

    With a registry, every name must resolve there.
    """
    if registry is not None:
        for prim in (*aspect.advice, target):
            if not registry.has_primitive(prim):
                raise UnknownPrimitive(f"no primitive named {prim!r}")
    b = Behavior(name or f"{aspect.name}.{target}")
    for prim in (*aspect.advice, target):
        b.add(Step.primitive(prim))
    return b


def equivalent_traces(x: Behavior, y: Behavior, store: Optional[Mapping] = None) -> bool:
    return flatten_names(x, store) == flatten_names(y, store)
