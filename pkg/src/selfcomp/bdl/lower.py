"""Evaluate parsed declarations into a behavior store, and lint them.

Declarations run top to bottom through the ordinary behavior operations, so
a name must be declared before it is used. ``lower`` stops at the first
failure and raises it with the offending span attached; ``lint`` runs the
same evaluation but records every failure as a diagnostic and keeps going.
"""

from __future__ import annotations

import warnings
from typing import Optional

from ..behavior import (
    Behavior,
    BehaviorStore,
    RefinementRegistry,
    Step,
    Trait,
    flatten,
)
from ..errors import (
    SelfCompError,
    TraitWarning,
    UnknownParent,
    UnknownPrimitive,
    UnknownTrait,
    UnresolvedReference,
)
from ..registry import Registry
from .ast import BehaviorDecl, Module, Refinement, RefineBlock, StepRef, TraitDecl
from .parser import parse
from .source import Diagnostic, Span, has_errors


class BDLSyntaxError(SelfCompError):
    def __init__(self, diagnostics: list[Diagnostic]) -> None:
        first = next(d for d in diagnostics if d.is_error)
        super().__init__(first.message, span=first.span)
        self.diagnostics = diagnostics


class _AnyWrapper:
    def has_wrapper(self, name: str) -> bool:
        return True


class _Evaluator:
    def __init__(self, registry: Optional[Registry], refinements: Optional[RefinementRegistry], collect: bool):
        self.registry = registry
        self.refinements = refinements if refinements is not None else RefinementRegistry()
        self.collect = collect
        self.store = BehaviorStore()
        self.traits: dict[str, tuple[Trait, TraitDecl]] = {}
        self.used_traits: set[str] = set()
        self.diagnostics: list[Diagnostic] = []

    def report(self, err: SelfCompError, span: Span) -> None:
        if not self.collect:
            if err.span is None:
                err.span = span
            raise err
        self.diagnostics.append(Diagnostic("error", err.code, err.message, span))

    def warn(self, code: str, message: str, span: Span) -> None:
        self.diagnostics.append(Diagnostic("warning", code, message, span))

    def run(self, module: Module) -> BehaviorStore:
        for decl in module.decls:
            if isinstance(decl, BehaviorDecl):
                self.behavior_decl(decl)
            elif isinstance(decl, RefineBlock):
                self.refine_block(decl)
            else:
                self.trait_decl(decl)
        return self.store

    def behavior_decl(self, decl: BehaviorDecl) -> None:
        if decl.name in self.store:
            self.warn("Redefinition", f"behavior {decl.name} redefined; the earlier definition is replaced", decl.span)
        try:
            if decl.extends is None:
                b = Behavior(decl.name)
            elif decl.extends not in self.store:
                raise UnknownParent(f"{decl.name} extends undeclared behavior {decl.extends}")
            else:
                b = self.store[decl.extends].derive(decl.name)
            self.store.put(b)
        except SelfCompError as err:
            self.report(err, decl.span)
            return
        self.refine_all(b, decl.refinements)

    def refine_block(self, decl: RefineBlock) -> None:
        if decl.target not in self.store:
            self.report(UnresolvedReference(f"refine of undeclared behavior {decl.target}"), decl.span)
            return
        self.refine_all(self.store[decl.target], decl.refinements)

    def trait_decl(self, decl: TraitDecl) -> None:
        if decl.name in self.traits:
            self.warn("Redefinition", f"trait {decl.name} redefined; the earlier definition is replaced", decl.span)
        try:
            for entry in decl.entries:
                if entry.value is not None:
                    self.check_primitive(entry.value)
            trait = Trait(
                decl.name,
                tuple((e.key, None if e.value is None else Step.primitive(e.value)) for e in decl.entries),
            )
        except SelfCompError as err:
            self.report(err, decl.span)
            return
        self.traits[decl.name] = (trait, decl)

    def refine_all(self, b: Behavior, refinements) -> None:
        for r in refinements:
            try:
                self.refine(b, r)
            except SelfCompError as err:
                self.report(err, r.span)

    def check_primitive(self, name: str) -> None:
        if self.registry is not None and not self.registry.has_primitive(name):
            raise UnknownPrimitive(f"no primitive named {name!r}")

    def step(self, ref: StepRef) -> Step:
        if ref.composite:
            if ref.name not in self.store:
                raise UnresolvedReference(f"no behavior named {ref.name!r} declared before this point")
            return Step.composite(ref.name, rename=ref.rename)
        self.check_primitive(ref.name)
        return Step.primitive(ref.name, rename=ref.rename)

    def refine(self, b: Behavior, r: Refinement) -> None:
        kind = r.kind
        if kind == "add":
            b.add(self.step(r.stepref))
        elif kind == "before":
            b.before(r.anchor, self.step(r.stepref))
        elif kind == "after":
            b.after(r.anchor, self.step(r.stepref))
        elif kind == "update":
            b.update(r.anchor, self.step(r.stepref))
        elif kind == "delete":
            b.remove(r.anchor)
        elif kind == "map":
            b.map(r.anchor, r.wrapper, self.registry if self.registry is not None else _AnyWrapper())
        elif kind == "assign":
            if r.name not in self.traits:
                raise UnknownTrait(f"no trait named {r.name!r} declared before this point")
            self.used_traits.add(r.name)
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always", TraitWarning)
                b.assign(self.traits[r.name][0])
            for w in caught:
                if issubclass(w.category, TraitWarning):
                    self.warn("TraitRemoveAbsent", str(w.message), r.span)
                else:
                    warnings.warn_explicit(w.message, w.category, w.filename, w.lineno)
        elif kind == "custom":
            b.apply(r.name, self.refinements)
        else:  # pragma: no cover - parser never produces other kinds
            raise ValueError(kind)

    def final_checks(self) -> None:
        for name, (_, decl) in self.traits.items():
            if name not in self.used_traits:
                self.warn("UnusedTrait", f"trait {name} is never assigned", decl.span)


def lower(
    module: Module,
    registry: Optional[Registry] = None,
    refinements: Optional[RefinementRegistry] = None,
) -> BehaviorStore:
    """Build a store from a parsed module, raising the first failure.

    With ``registry`` set, primitives and wrappers must be registered there;
    without it those names are not checked.
    """
    return _Evaluator(registry, refinements, collect=False).run(module)


def lint(
    module: Module,
    registry: Optional[Registry] = None,
    refinements: Optional[RefinementRegistry] = None,
) -> list[Diagnostic]:
    ev = _Evaluator(registry, refinements, collect=True)
    store = ev.run(module)
    ev.final_checks()
    decl_spans = {d.name: d.span for d in module.decls if isinstance(d, BehaviorDecl)}
    for name, b in store.items():
        try:
            flatten(b, store)
        except SelfCompError as err:
            ev.diagnostics.append(Diagnostic("error", err.code, err.message, decl_spans.get(name, Span(0, 0, 1, 1))))
    return ev.diagnostics


def check_source(
    source: str,
    registry: Optional[Registry] = None,
    refinements: Optional[RefinementRegistry] = None,
) -> list[Diagnostic]:
    """Syntax and semantic diagnostics for a source text, in source order."""
    module, diagnostics = parse(source)
    if not has_errors(diagnostics):
        diagnostics = diagnostics + lint(module, registry, refinements)
    return sorted(diagnostics, key=lambda d: (d.span.start, d.span.end))


def load(
    source: str,
    registry: Optional[Registry] = None,
    refinements: Optional[RefinementRegistry] = None,
) -> BehaviorStore:
    """Parse and lower; syntax errors raise :class:`BDLSyntaxError`."""
    module, diagnostics = parse(source)
    if has_errors(diagnostics):
        raise BDLSyntaxError(diagnostics)
    return lower(module, registry, refinements)
