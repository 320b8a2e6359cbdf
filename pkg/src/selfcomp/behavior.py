"""Behaviors: named, ordered pipelines of uniquely named steps.

A behavior is built by appending steps, derived into children by snapshot
copy, and refined in place through anchor-addressed operations (insert,
update, remove, map), trait assignment, or registered custom refinements.
Every operation validates before it mutates, so a failed call leaves the
behavior untouched, and every operation returns the behavior so calls chain::

    db = Behavior("DBQuery").add("auth").add("validate").add("monit")
    write = db.derive("WriteDBQuery").add("writeBack").update("monit", "cacheMonit")
"""

from __future__ import annotations

import re
import warnings
from collections.abc import Callable, Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Union

from .errors import (
    CycleDetected,
    DuplicateRefinement,
    DuplicateStepName,
    InvariantViolation,
    MalformedName,
    RegistryFrozen,
    TraitWarning,
    UnknownAnchor,
    UnknownRefinement,
    UnknownWrapper,
    UnresolvedReference,
)

# A leading digit run is tolerated so names like "2factorAuth" stay legal.
NAME_PATTERN = r"[0-9]*[A-Za-z_][A-Za-z0-9_]*"
_STEP_NAME_RE = re.compile(rf"{NAME_PATTERN}\Z")
_BEHAVIOR_NAME_RE = re.compile(rf"{NAME_PATTERN}(?:\.{NAME_PATTERN})*\Z")


def check_step_name(name: str) -> str:
    if not isinstance(name, str) or not _STEP_NAME_RE.match(name):
        raise MalformedName(f"malformed step name {name!r}")
    return name


def check_behavior_name(name: str) -> str:
    """Behavior names may be dotted (``User.getName``); step names may not."""
    if not isinstance(name, str) or not _BEHAVIOR_NAME_RE.match(name):
        raise MalformedName(f"malformed behavior name {name!r}")
    return name


def default_step_name(behavior_name: str) -> str:
    return behavior_name.rsplit(".", 1)[-1]


@dataclass(frozen=True)
class PrimitiveRef:
    name: str


@dataclass(frozen=True)
class Composite:
    behavior: str


@dataclass(frozen=True)
class Wrapped:
    wrapper: str
    inner: "Payload"


Payload = Union[PrimitiveRef, Composite, Wrapped]


def unwrap(payload: Payload) -> tuple[tuple[str, ...], Union[PrimitiveRef, Composite]]:
    """Split a payload into its wrapper names (outermost first) and its core."""
    wrappers = []
    while isinstance(payload, Wrapped):
        wrappers.append(payload.wrapper)
        payload = payload.inner
    return tuple(wrappers), payload


@dataclass(frozen=True)
class Step:
    name: str
    payload: Payload

    def __post_init__(self) -> None:
        check_step_name(self.name)

    @classmethod
    def primitive(cls, name: str, *, rename: Optional[str] = None) -> "Step":
        return cls(rename or name, PrimitiveRef(check_step_name(name)))

    @classmethod
    def composite(cls, behavior: str, *, rename: Optional[str] = None) -> "Step":
        check_behavior_name(behavior)
        return cls(rename or default_step_name(behavior), Composite(behavior))

    @property
    def references(self) -> Optional[str]:
        """Name of the behavior this step nests, if any."""
        core = unwrap(self.payload)[1]
        return core.behavior if isinstance(core, Composite) else None


StepLike = Union[Step, str]


def as_step(step: StepLike) -> Step:
    if isinstance(step, Step):
        return step
    if isinstance(step, str):
        return Step.primitive(step)
    raise TypeError(f"expected Step or primitive name, got {type(step).__name__}")


class Position(Enum):
    BEFORE = "before"
    AFTER = "after"


@dataclass(frozen=True)
class Trait:
    """Ordered replace/remove actions; ``None`` as the action means remove."""

    name: str
    actions: tuple[tuple[str, Optional[Step]], ...] = ()

    def __post_init__(self) -> None:
        seen = set()
        actions = []
        for key, action in self.actions:
            check_step_name(key)
            if key in seen:
                raise MalformedName(f"trait {self.name!r} lists {key!r} twice")
            seen.add(key)
            actions.append((key, None if action is None else as_step(action)))
        object.__setattr__(self, "actions", tuple(actions))

    @classmethod
    def from_mapping(cls, name: str, mapping: Mapping[str, Optional[StepLike]]) -> "Trait":
        return cls(name, tuple(mapping.items()))


@dataclass
class Behavior:
    name: str
    parent: Optional[str] = None
    depth: int = 0
    steps: list[Step] = field(default_factory=list)
    store: Optional["BehaviorStore"] = field(default=None, repr=False, compare=False)

    def __post_init__(self) -> None:
        check_behavior_name(self.name)
        if self.depth < 0:
            raise ValueError("depth must be nonnegative")
        self.steps = [as_step(s) for s in self.steps]
        _validate_steps(self, self.steps)

    # queries

    def __len__(self) -> int:
        return len(self.steps)

    def __contains__(self, step_name: object) -> bool:
        return any(s.name == step_name for s in self.steps)

    def __iter__(self) -> Iterator[Step]:
        return iter(self.steps)

    @property
    def step_names(self) -> list[str]:
        return [s.name for s in self.steps]

    def index(self, anchor: str) -> int:
        for i, s in enumerate(self.steps):
            if s.name == anchor:
                return i
        raise UnknownAnchor(f"{self.name} has no step {anchor!r}")

    def step(self, anchor: str) -> Step:
        return self.steps[self.index(anchor)]

    # construction and inheritance

    def derive(self, child_name: str) -> "Behavior":
        """Snapshot this behavior into a new, independent child.

        Steps are immutable, so copying the list is a deep snapshot. The
        child is not registered anywhere; use ``BehaviorStore.derive`` for
        that.
        """
        return Behavior(
            check_behavior_name(child_name),
            parent=self.name,
            depth=self.depth + 1,
            steps=list(self.steps),
        )

    # explicit refinement

    def add(self, step: StepLike) -> "Behavior":
        step = as_step(step)
        self._check_new_name(step.name)
        self._check_refs(step)
        self.steps.append(step)
        return self

    def insert(self, anchor: str, step: StepLike, position: Position = Position.BEFORE) -> "Behavior":
        step = as_step(step)
        i = self.index(anchor)
        self._check_new_name(step.name)
        self._check_refs(step)
        self.steps.insert(i if position is Position.BEFORE else i + 1, step)
        return self

    def before(self, anchor: str, step: StepLike) -> "Behavior":
        return self.insert(anchor, step, Position.BEFORE)

    def after(self, anchor: str, step: StepLike) -> "Behavior":
        return self.insert(anchor, step, Position.AFTER)

    def update(self, anchor: str, step: StepLike) -> "Behavior":
        """Replace the anchor in place; the slot takes the new step's name."""
        step = as_step(step)
        i = self.index(anchor)
        if step.name != anchor:
            self._check_new_name(step.name)
        self._check_refs(step)
        self.steps[i] = step
        return self

    def remove(self, anchor: str) -> "Behavior":
        del self.steps[self.index(anchor)]
        return self

    delete = remove

    def map(self, anchor: str, wrapper: str, wrappers) -> "Behavior":
        """Wrap the anchor's payload with a registered wrapper combinator.

        ``wrappers`` is normally a :class:`selfcomp.registry.Registry`; only
        its ``has_wrapper`` method is used.
        """
        i = self.index(anchor)
        if not wrappers.has_wrapper(wrapper):
            raise UnknownWrapper(f"no wrapper named {wrapper!r}")
        old = self.steps[i]
        self.steps[i] = Step(old.name, Wrapped(wrapper, old.payload))
        return self

    map_step = map

    # implicit refinement

    def assign(self, trait: Trait) -> "Behavior":
        """Apply a trait's actions in order, all or nothing.

        Replace updates a present step and appends an absent one; Remove of
        an absent step only warns.
        """
        original = list(self.steps)
        try:
            for key, action in trait.actions:
                if action is None:
                    if key in self:
                        self.remove(key)
                    else:
                        warnings.warn(
                            f"trait {trait.name!r}: {self.name} has no step {key!r} to remove",
                            TraitWarning,
                            stacklevel=2,
                        )
                elif key in self:
                    self.update(key, action)
                else:
                    self.add(action)
        except Exception:
            self.steps = original
            raise
        return self

    # custom refinement

    def apply(self, refinement: str, refinements: "RefinementRegistry") -> "Behavior":
        refinements.apply(self, refinement)
        return self

    # execution order

    def flatten(self, store: Optional["BehaviorStore"] = None) -> list[tuple[str, str]]:
        return flatten(self, store)

    # internals

    def _check_new_name(self, name: str) -> None:
        if name in self:
            raise DuplicateStepName(f"{self.name} already has a step named {name!r}")

    def _check_refs(self, step: Step) -> None:
        target = step.references
        if target is None:
            return
        if target == self.name:
            raise CycleDetected(f"{self.name} cannot contain itself")
        if self.store is not None and self.store.get(self.name) is self:
            if self.store.reaches(target, self.name):
                raise CycleDetected(f"nesting {target} in {self.name} closes a cycle")


def _validate_steps(behavior: Behavior, steps: list) -> None:
    seen = set()
    for s in steps:
        if not isinstance(s, Step):
            raise InvariantViolation(f"{behavior.name}: {s!r} is not a Step")
        if s.name in seen:
            raise InvariantViolation(f"{behavior.name}: duplicate step name {s.name!r}")
        seen.add(s.name)
        if s.references == behavior.name:
            raise InvariantViolation(f"{behavior.name} cannot contain itself")


RefinementProcedure = Callable[[list], None]


class RefinementRegistry:
    """Named custom refinements; each receives the live step list."""

    def __init__(self, builtins: bool = True) -> None:
        self._procs: dict[str, RefinementProcedure] = {}
        self._frozen = False
        if builtins:
            self.register("deleteAddition", delete_addition)

    def register(self, name: str, proc: RefinementProcedure) -> None:
        if self._frozen:
            raise RegistryFrozen("refinement registry is frozen")
        if name in self._procs:
            raise DuplicateRefinement(f"refinement {name!r} already registered")
        self._procs[check_step_name(name)] = proc

    def freeze(self) -> None:
        self._frozen = True

    @property
    def frozen(self) -> bool:
        return self._frozen

    def __contains__(self, name: object) -> bool:
        return name in self._procs

    def apply(self, behavior: Behavior, name: str) -> Behavior:
        try:
            proc = self._procs[name]
        except KeyError:
            raise UnknownRefinement(f"no refinement named {name!r}") from None
        original = list(behavior.steps)
        work = list(original)
        proc(work)
        try:
            _validate_steps(behavior, work)
            if behavior.store is not None and behavior.store.get(behavior.name) is behavior:
                for s in work:
                    if s.references and behavior.store.reaches(s.references, behavior.name):
                        raise InvariantViolation(f"{behavior.name}: refinement {name!r} closes a cycle")
        except InvariantViolation:
            behavior.steps = original
            raise
        behavior.steps = work
        return behavior


def delete_addition(steps: list) -> None:
    """Drop every step whose name starts with ``add``."""
    steps[:] = [s for s in steps if not s.name.startswith("add")]


class BehaviorStore(Mapping):
    """Behaviors by name, in registration order.

    Behaviors placed here are bound to the store, so composite references
    they gain later are checked for cycles against the whole store.
    """

    def __init__(self, behaviors: Iterable[Behavior] = ()) -> None:
        self._behaviors: dict[str, Behavior] = {}
        for b in behaviors:
            self.put(b)

    def __getitem__(self, name: str) -> Behavior:
        return self._behaviors[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self._behaviors)

    def __len__(self) -> int:
        return len(self._behaviors)

    def create(self, name: str) -> Behavior:
        return self.put(Behavior(name))

    def derive(self, parent: Union[str, Behavior], child_name: str) -> Behavior:
        if isinstance(parent, str):
            if parent not in self:
                raise UnresolvedReference(f"no behavior named {parent!r}")
            parent = self[parent]
        return self.put(parent.derive(child_name))

    def put(self, behavior: Behavior) -> Behavior:
        """Register (or redefine) a behavior, rejecting cycles it would close."""
        previous = self._behaviors.pop(behavior.name, None)
        self._behaviors[behavior.name] = behavior
        for s in behavior.steps:
            if s.references and self.reaches(s.references, behavior.name):
                del self._behaviors[behavior.name]
                if previous is not None:
                    self._behaviors[behavior.name] = previous
                raise CycleDetected(f"{behavior.name} would reach itself through {s.references}")
        behavior.store = self
        return behavior

    def reaches(self, start: str, goal: str) -> bool:
        """True if ``goal`` is ``start`` or nested somewhere under it."""
        stack, seen = [start], set()
        while stack:
            name = stack.pop()
            if name == goal:
                return True
            if name in seen or name not in self._behaviors:
                continue
            seen.add(name)
            stack.extend(s.references for s in self._behaviors[name].steps if s.references)
        return False

    def flatten(self, name: str) -> list[tuple[str, str]]:
        return flatten(self[name], self)


# execution plans


@dataclass(frozen=True)
class Leaf:
    step: str
    primitive: str


@dataclass(frozen=True)
class Group:
    step: str
    behavior: str
    children: tuple


@dataclass(frozen=True)
class Wrap:
    step: str
    wrapper: str
    inner: object


def plan(behavior: Behavior, store: Optional[Mapping] = None) -> tuple:
    """Resolve composites into a tree of Leaf/Group/Wrap nodes."""
    if store is None:
        store = behavior.store
    return _plan_steps(behavior, store, (behavior.name,))


def _plan_steps(behavior: Behavior, store, stack: tuple) -> tuple:
    return tuple(_plan_payload(s.name, s.payload, store, stack) for s in behavior.steps)


def _plan_payload(step: str, payload: Payload, store, stack: tuple):
    if isinstance(payload, Wrapped):
        return Wrap(step, payload.wrapper, _plan_payload(step, payload.inner, store, stack))
    if isinstance(payload, PrimitiveRef):
        return Leaf(step, payload.name)
    name = payload.behavior
    if name in stack:
        raise CycleDetected(" -> ".join(stack + (name,)))
    if store is None or name not in store:
        raise UnresolvedReference(f"no behavior named {name!r}")
    return Group(step, name, _plan_steps(store[name], store, stack + (name,)))


def leaves(nodes) -> Iterator[Leaf]:
    for node in nodes:
        if isinstance(node, Leaf):
            yield node
        elif isinstance(node, Group):
            yield from leaves(node.children)
        else:
            yield from leaves((node.inner,))


def flatten(behavior: Behavior, store: Optional[Mapping] = None) -> list[tuple[str, str]]:
    """Depth-first expansion into ``(step name, primitive name)`` pairs."""
    return [(leaf.step, leaf.primitive) for leaf in leaves(plan(behavior, store))]


def flatten_names(behavior: Behavior, store: Optional[Mapping] = None) -> list[str]:
    return [step for step, _ in flatten(behavior, store)]


def create(name: str) -> Behavior:
    return Behavior(name)
