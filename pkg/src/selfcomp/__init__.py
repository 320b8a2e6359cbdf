"""Self-composable behaviors: named step pipelines with multi-level
inheritance and explicit, trait-based and custom refinement."""

from .behavior import (
    Behavior,
    BehaviorStore,
    Composite,
    Position,
    PrimitiveRef,
    RefinementRegistry,
    Step,
    Trait,
    Wrapped,
    create,
    flatten,
    flatten_names,
)
from .executor import ExecOutcome, Status, exec_behavior, trace_of
from .registry import Primitive, Registry, WrapperCombinator, corpus_registry, trace_primitive

__all__ = [
    "Behavior",
    "BehaviorStore",
    "Composite",
    "ExecOutcome",
    "Position",
    "Primitive",
    "PrimitiveRef",
    "RefinementRegistry",
    "Registry",
    "Status",
    "Step",
    "Trait",
    "Wrapped",
    "WrapperCombinator",
    "corpus_registry",
    "create",
    "exec_behavior",
    "flatten",
    "flatten_names",
    "trace_of",
    "trace_primitive",
]
