"""Name-resolved primitives and wrapper combinators.

Values threaded through a pipeline are plain Python data: ``None``, ``int``,
``str``, ``list`` and ``dict`` with string keys, nested to any finite depth.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterable
from dataclasses import dataclass
from typing import Any, Union

from .errors import (
    DuplicatePrimitive,
    DuplicateWrapper,
    RegistryFrozen,
    StepError,
    UnknownPrimitive,
    UnknownWrapper,
)

log = logging.getLogger(__name__)

Value = Union[None, int, str, list, dict]


def is_value(obj: Any) -> bool:
    if obj is None or isinstance(obj, str):
        return True
    if isinstance(obj, int):
        return not isinstance(obj, bool)
    if isinstance(obj, list):
        return all(is_value(v) for v in obj)
    if isinstance(obj, dict):
        return all(isinstance(k, str) and is_value(v) for k, v in obj.items())
    return False


@dataclass(frozen=True)
class Primitive:
    """A deterministic step: ``apply`` returns a Value or raises StepError."""

    name: str
    apply: Callable[[Value], Value]

    def __call__(self, value: Value) -> Value:
        return self.apply(value)


@dataclass(frozen=True)
class WrapperCombinator:
    name: str
    wrap: Callable[[Primitive], Primitive]


def trace_primitive(name: str) -> Primitive:
    """A primitive that appends its own name to the incoming list."""

    def apply(value: Value) -> Value:
        if not isinstance(value, list):
            raise StepError(f"{name} expects a list, got {type(value).__name__}")
        return value + [name]

    return Primitive(name, apply)


def failing_primitive(name: str, message: str = "failed") -> Primitive:
    def apply(value: Value) -> Value:
        raise StepError(message)

    return Primitive(name, apply)


def identity_wrapper(p: Primitive) -> Primitive:
    return p


def repeat(n: int) -> Callable[[Primitive], Primitive]:
    """Run the wrapped primitive ``n`` times, feeding each output back in."""
    if n < 1:
        raise ValueError("repeat count must be at least 1")

    def wrap(p: Primitive) -> Primitive:
        def apply(value: Value) -> Value:
            for _ in range(n):
                value = p.apply(value)
            return value

        return Primitive(p.name, apply)

    return wrap


def log_entry_exit(p: Primitive) -> Primitive:
    def apply(value: Value) -> Value:
        log.debug("enter %s: %r", p.name, value)
        result = p.apply(value)
        log.debug("exit %s: %r", p.name, result)
        return result

    return Primitive(p.name, apply)


BUILTIN_WRAPPERS = {
    "identity": identity_wrapper,
    "repeat2": repeat(2),
    "repeat3": repeat(3),
    "logEntryExit": log_entry_exit,
}


class Registry:
    """Primitives and wrappers, writable until frozen and read-only after."""

    def __init__(self, builtin_wrappers: bool = True) -> None:
        self._primitives: dict[str, Primitive] = {}
        self._wrappers: dict[str, WrapperCombinator] = {}
        self._frozen = False
        if builtin_wrappers:
            for name, wrap in BUILTIN_WRAPPERS.items():
                self.register_wrapper(name, wrap)

    @property
    def frozen(self) -> bool:
        return self._frozen

    def freeze(self) -> "Registry":
        self._frozen = True
        return self

    def register_primitive(self, name: str, apply: Callable[[Value], Value]) -> None:
        if self._frozen:
            raise RegistryFrozen(f"cannot register primitive {name!r}: registry is frozen")
        if name in self._primitives:
            raise DuplicatePrimitive(f"primitive {name!r} already registered")
        self._primitives[name] = Primitive(name, apply)

    def register_wrapper(self, name: str, wrap: Callable[[Primitive], Primitive]) -> None:
        if self._frozen:
            raise RegistryFrozen(f"cannot register wrapper {name!r}: registry is frozen")
        if name in self._wrappers:
            raise DuplicateWrapper(f"wrapper {name!r} already registered")
        self._wrappers[name] = WrapperCombinator(name, wrap)

    def add_trace_primitives(self, names: Iterable[str]) -> "Registry":
        for name in names:
            if name not in self._primitives:
                self.register_primitive(name, trace_primitive(name).apply)
        return self

    def lookup(self, name: str) -> Primitive:
        try:
            return self._primitives[name]
        except KeyError:
            raise UnknownPrimitive(f"no primitive named {name!r}") from None

    def wrapper(self, name: str) -> WrapperCombinator:
        try:
            return self._wrappers[name]
        except KeyError:
            raise UnknownWrapper(f"no wrapper named {name!r}") from None

    def has_primitive(self, name: str) -> bool:
        return name in self._primitives

    def has_wrapper(self, name: str) -> bool:
        return name in self._wrappers

    @property
    def primitive_names(self) -> list[str]:
        return list(self._primitives)

    @property
    def wrapper_names(self) -> list[str]:
        return list(self._wrappers)


CORPUS_PRIMITIVES = (
    # read features
    "logging",
    "auth",
    "cacheLookup",
    "userIdValidation",
    "postNumberValidation",
    "rangeValidation",
    "readUserNameQuery",
    "readUserProfileQuery",
    "readUserPosts",
    "readUserOnline",
    "ReadRecentsQuery",
    "ReadPopularQuery",
    "ReadRecentsSummaryQuery",
    "ReadRecentsSummaryWithoutImageQuery",
    "ReadPopularSummaryQuery",
    "ReadPopularWithoutImageQuery",
    # write-side lifecycle
    "validate",
    "monit",
    "writeBack",
    "cacheMonit",
    "beforeValidate",
    "afterValidate",
    "createUserSQLExec",
    "createMsgSQLExec",
    "2factorAuth",
    "geographicalBlock",
)


def corpus_registry(extra: Iterable[str] = ()) -> Registry:
    """Unfrozen registry of trace primitives for the bundled corpus.

    ``validateWrapper`` is registered as a pass-through wrapper so the
    write-side lifecycle can map it.
    """
    reg = Registry()
    reg.add_trace_primitives(CORPUS_PRIMITIVES)
    reg.add_trace_primitives(extra)
    reg.register_wrapper("validateWrapper", log_entry_exit)
    return reg
