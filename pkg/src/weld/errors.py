"""Error and diagnostic types shared across the toolkit.

Every failure carries a stable machine-readable ``code`` so callers (CLI,
harness, tests) can branch on the kind of failure without string matching.
"""

from __future__ import annotations

from dataclasses import dataclass


class WeldError(Exception):
    """Base class for all toolkit errors."""

    def __init__(
        self,
        code: str,
        message: str,
        path: str | None = None,
        line: int = 0,
        col: int = 0,
    ):
        self.code = code
        self.message = message
        self.path = path
        self.line = line
        self.col = col
        super().__init__(self.render())

    def render(self) -> str:
        loc = ""
        if self.path:
            loc = self.path
            if self.line:
                loc += f":{self.line}:{self.col}"
            loc += ": "
        elif self.line:
            loc = f"{self.line}:{self.col}: "
        return f"{loc}{self.code}: {self.message}"


class ParseError(WeldError):
    """Lexical or syntactic failure, or a structural rule the parser owns."""


class ModelError(WeldError):
    """Invalid class-model input (.cdm)."""


class TransformError(WeldError):
    """Failure inside one of the artifact-level transformations."""


class GenerateError(WeldError):
    """Failure while running a generation strategy."""


class EvalError(WeldError):
    """Runtime failure while evaluating a program."""


@dataclass(frozen=True)
class Diagnostic:
    """One static-check violation, reported with position and code."""

    code: str
    message: str
    path: str = ""
    line: int = 0
    col: int = 0

    def render(self) -> str:
        loc = f"{self.path}:{self.line}:{self.col}: " if self.path else ""
        return f"{loc}{self.code}: {self.message}"


class LinkError(WeldError):
    """Linking failed; carries the resolver diagnostics when those are the cause."""

    def __init__(
        self,
        code: str,
        message: str,
        diagnostics: tuple[Diagnostic, ...] = (),
    ):
        self.diagnostics = tuple(diagnostics)
        super().__init__(code, message)

    def render(self) -> str:
        base = super().render()
        if self.diagnostics:
            base += "\n" + "\n".join("  " + d.render() for d in self.diagnostics)
        return base

    def has_code(self, code: str) -> bool:
        return self.code == code or any(d.code == code for d in self.diagnostics)
