from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .source import Span

REFINEMENT_KINDS = ("add", "before", "after", "update", "delete", "map", "assign", "custom")


@dataclass(frozen=True)
class StepRef:
    name: str
    composite: bool
    span: Span
    rename: Optional[str] = None


@dataclass(frozen=True)
class Refinement:
    """One refinement statement.

    ``anchor`` is set for before/after/update/delete/map, ``stepref`` for
    add/before/after/update, ``wrapper`` for map, and ``name`` holds the
    trait (assign) or custom refinement (custom).
    """

    kind: str
    span: Span
    anchor: Optional[str] = None
    stepref: Optional[StepRef] = None
    wrapper: Optional[str] = None
    name: Optional[str] = None


@dataclass(frozen=True)
class BehaviorDecl:
    name: str
    span: Span
    extends: Optional[str] = None
    refinements: tuple[Refinement, ...] = ()
    has_body: bool = False


@dataclass(frozen=True)
class RefineBlock:
    target: str
    span: Span
    refinements: tuple[Refinement, ...] = ()


@dataclass(frozen=True)
class TraitEntry:
    key: str
    value: Optional[str]  # None removes
    span: Span


@dataclass(frozen=True)
class TraitDecl:
    name: str
    span: Span
    entries: tuple[TraitEntry, ...] = ()


Decl = Union[BehaviorDecl, RefineBlock, TraitDecl]


@dataclass
class Module:
    decls: list[Decl] = field(default_factory=list)
