"""Source spans and diagnostics."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Span:
    """A source range. ``start``/``end`` are UTF-8 byte offsets; line and
    column (1-based, columns in characters) locate ``start``."""

    start: int
    end: int
    line: int
    column: int

    def __post_init__(self) -> None:
        if self.start > self.end:
            raise ValueError("span start after end")

    @classmethod
    def point(cls, offset: int, line: int, column: int) -> "Span":
        return cls(offset, offset, line, column)


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    code: str
    message: str
    span: Span

    @property
    def is_error(self) -> bool:
        return self.severity == "error"

    def format(self, filename: str = "<input>") -> str:
        return (
            f"{filename}:{self.span.line}:{self.span.column}: "
            f"{self.severity}[{self.code}]: {self.message}"
        )


def has_errors(diagnostics) -> bool:
    return any(d.is_error for d in diagnostics)
