"""Recursive-descent parser for behavior-definition files.

Grammar::

    file         := decl*
    decl         := behavior_decl | trait_decl | refine_block
    behavior_decl:= "behavior" NAME ["extends" NAME] ["{" refinement* "}"]
    refine_block := "refine" NAME "{" refinement* "}"
    refinement   := "add" stepref | "before" NAME stepref | "after" NAME stepref
                  | "update" NAME stepref | "delete" NAME | "map" NAME "with" NAME
                  | "assign" NAME | "apply" NAME
    trait_decl   := "trait" NAME "{" (NAME ":" (NAME | "null"))* "}"
    stepref      := (NAME | "behavior" NAME) ["as" NAME]

Behavior names may be dotted; every other name is a plain identifier.
Errors never stop the parse: a bad refinement is skipped up to the next
refinement keyword, a bad declaration up to the next declaration keyword.
"""

from __future__ import annotations

from typing import Optional

from .ast import (
    BehaviorDecl,
    Module,
    Refinement,
    RefineBlock,
    StepRef,
    TraitDecl,
    TraitEntry,
)
from .lexer import Token, tokenize
from .source import Diagnostic, Span

DECL_KEYWORDS = frozenset({"behavior", "trait", "refine"})
REFINEMENT_KEYWORDS = frozenset({"add", "before", "after", "update", "delete", "map", "assign", "apply"})


class _Fail(Exception):
    pass


def parse(source: str) -> tuple[Module, list[Diagnostic]]:
    tokens, diagnostics = tokenize(source)
    parser = _Parser(tokens, diagnostics)
    return parser.parse_module(), parser.diagnostics


class _Parser:
    def __init__(self, tokens: list[Token], diagnostics: list[Diagnostic]) -> None:
        self.tokens = tokens
        self.i = 0
        self.diagnostics = diagnostics

    # token helpers

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    @property
    def prev(self) -> Optional[Token]:
        return self.tokens[self.i - 1] if self.i else None

    def next(self) -> Token:
        t = self.tokens[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def at(self, *kinds: str) -> bool:
        return self.tok.kind in kinds

    def error_span(self) -> Span:
        """Where to report a missing token.

        If the offending token sits on a later line (or is end of input),
        point just past the previous token instead, at the end of the line
        that is actually incomplete.
        """
        prev = self.prev
        if prev is not None and (self.tok.kind == "eof" or self.tok.span.line != prev.end_line):
            return Span.point(prev.span.end, prev.end_line, prev.end_column)
        return self.tok.span

    def fail(self, message: str, span: Optional[Span] = None) -> _Fail:
        self.diagnostics.append(Diagnostic("error", "Syntax", message, span or self.error_span()))
        return _Fail()

    def _describe(self) -> str:
        return "end of input" if self.tok.kind == "eof" else repr(self.tok.text)

    def expect(self, kind: str, what: str) -> Token:
        if self.tok.kind != kind:
            after = f" after {self.prev.text!r}" if self.prev is not None else ""
            raise self.fail(f"expected {what}{after}, found {self._describe()}")
        return self.next()

    def expect_name(self, what: str, dotted: bool = False) -> Token:
        t = self.expect("name", what)
        if not dotted and "." in t.text:
            raise self.fail(f"{what} {t.text!r} may not contain '.'", t.span)
        return t

    def join(self, start: Span) -> Span:
        end = self.prev.span.end if self.prev is not None else start.end
        return Span(start.start, max(end, start.end), start.line, start.column)

    # grammar

    def parse_module(self) -> Module:
        module = Module()
        while not self.at("eof"):
            if not self.at(*DECL_KEYWORDS):
                self.fail(f"expected 'behavior', 'trait' or 'refine', found {self._describe()}", self.tok.span)
                self.next()
                self.sync(DECL_KEYWORDS)
                continue
            try:
                module.decls.append(self.parse_decl())
            except _Fail:
                self.sync(DECL_KEYWORDS)
        return module

    def sync(self, stop: frozenset) -> None:
        while not self.at("eof", *stop):
            self.next()

    def parse_decl(self):
        kw = self.next()
        if kw.kind == "behavior":
            return self.parse_behavior(kw)
        if kw.kind == "refine":
            name = self.expect_name("behavior name", dotted=True)
            self.expect("{", "'{'")
            refinements = self.parse_block()
            return RefineBlock(name.text, self.join(kw.span), refinements)
        return self.parse_trait(kw)

    def parse_behavior(self, kw: Token) -> BehaviorDecl:
        name = self.expect_name("behavior name", dotted=True)
        extends = None
        if self.at("extends"):
            self.next()
            extends = self.expect_name("parent behavior name", dotted=True).text
        refinements: tuple = ()
        has_body = False
        if self.at("{"):
            self.next()
            has_body = True
            refinements = self.parse_block()
        return BehaviorDecl(name.text, self.join(kw.span), extends, refinements, has_body)

    def parse_block(self) -> tuple[Refinement, ...]:
        """Refinements up to and including the closing brace."""
        out = []
        while True:
            if self.at("}"):
                self.next()
                return tuple(out)
            if self.at("eof", *DECL_KEYWORDS - {"behavior"}):
                self.fail(f"expected '}}' before {self._describe()}")
                return tuple(out)
            if self.at("behavior"):
                self.fail("expected '}' before 'behavior'")
                return tuple(out)
            try:
                out.append(self.parse_refinement())
            except _Fail:
                self.sync(REFINEMENT_KEYWORDS | DECL_KEYWORDS | {"}"})

    def parse_refinement(self) -> Refinement:
        kw = self.next()
        if kw.kind not in REFINEMENT_KEYWORDS:
            raise self.fail(f"expected a refinement, found {kw.text!r}", kw.span)
        if kw.kind == "add":
            ref = self.parse_stepref()
            return Refinement("add", self.join(kw.span), stepref=ref)
        if kw.kind in ("before", "after", "update"):
            anchor = self.expect_name("anchor step name").text
            ref = self.parse_stepref()
            return Refinement(kw.kind, self.join(kw.span), anchor=anchor, stepref=ref)
        if kw.kind == "delete":
            anchor = self.expect_name("anchor step name").text
            return Refinement("delete", self.join(kw.span), anchor=anchor)
        if kw.kind == "map":
            anchor = self.expect_name("anchor step name").text
            self.expect("with", "'with'")
            wrapper = self.expect_name("wrapper name").text
            return Refinement("map", self.join(kw.span), anchor=anchor, wrapper=wrapper)
        if kw.kind == "assign":
            name = self.expect_name("trait name").text
            return Refinement("assign", self.join(kw.span), name=name)
        name = self.expect_name("refinement name").text
        return Refinement("custom", self.join(kw.span), name=name)

    def parse_stepref(self) -> StepRef:
        start = self.tok.span
        if self.at("behavior"):
            self.next()
            name = self.expect_name("behavior name", dotted=True).text
            composite = True
        else:
            name = self.expect_name("step name").text
            composite = False
        rename = None
        if self.at("as"):
            self.next()
            rename = self.expect_name("step name").text
        return StepRef(name, composite, self.join(start), rename)

    def parse_trait(self, kw: Token) -> TraitDecl:
        name = self.expect_name("trait name")
        self.expect("{", "'{'")
        entries = []
        while not self.at("}"):
            if self.at("eof", *DECL_KEYWORDS):
                raise self.fail(f"expected '}}' before {self._describe()}")
            try:
                key = self.expect_name("step name")
                self.expect(":", "':'")
                if self.at("null"):
                    self.next()
                    value = None
                else:
                    value = self.expect_name("primitive name or 'null'").text
                entries.append(TraitEntry(key.text, value, self.join(key.span)))
            except _Fail:
                while not self.at("eof", "}", *DECL_KEYWORDS):
                    if self.at("name") and self.tokens[self.i + 1].kind == ":":
                        break
                    self.next()
        self.next()
        return TraitDecl(name.text, self.join(kw.span), tuple(entries))
