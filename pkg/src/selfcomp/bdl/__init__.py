"""The behavior-definition language: parse, lower, lint and render."""

from .ast import BehaviorDecl, Module, Refinement, RefineBlock, StepRef, TraitDecl, TraitEntry
from .lower import BDLSyntaxError, check_source, lint, load, lower
from .parser import parse
from .render import render
from .source import Diagnostic, Span, has_errors

__all__ = [
    "BDLSyntaxError",
    "BehaviorDecl",
    "Diagnostic",
    "Module",
    "RefineBlock",
    "Refinement",
    "Span",
    "StepRef",
    "TraitDecl",
    "TraitEntry",
    "check_source",
    "has_errors",
    "lint",
    "load",
    "lower",
    "parse",
    "render",
]
