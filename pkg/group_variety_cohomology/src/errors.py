"""
Errors - 按模块分组的异常体系

每个异常都带有 `module` 与 `code`，CLI 以 "<module>.<Code>" 形式输出，
例如 "core_model.RankOutOfRange"。验证失败不是异常，而是报告。
"""

from typing import Any, List, Optional, Sequence


class GroupCohomologyError(Exception):
    module: str = "engine"

    def __init__(self, message: str, *, hint: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.hint = hint

    @property
    def code(self) -> str:
        return type(self).__name__

    @property
    def qualified_code(self) -> str:
        return f"{self.module}.{self.code}"

    def __str__(self) -> str:
        if self.hint:
            return f"{self.message} (hint: {self.hint})"
        return self.message


# core_model

class CoreModelError(GroupCohomologyError):
    module = "core_model"


class ValidationFailed(CoreModelError):
    def __init__(self, issues: Sequence[Any]):
        self.issues: List[Any] = list(issues)
        summary = "; ".join(str(issue) for issue in self.issues)
        hint = self.issues[0].hint if self.issues else None
        super().__init__(f"invalid group expression: {summary}", hint=hint)

    @classmethod
    def from_issues(cls, issues: Sequence[Any]) -> "ValidationFailed":
        """The subclass named by the first issue code, e.g. RankOutOfRange."""
        kind = ISSUE_ERRORS.get(issues[0].code, cls) if issues else cls
        return kind(issues)

    @property
    def code(self) -> str:
        # Surface the first concrete issue so callers see e.g. RankOutOfRange
        if self.issues:
            return self.issues[0].code
        return "ValidationFailed"

    def __str__(self) -> str:
        return self.message


class RankOutOfRange(ValidationFailed):
    pass


class BadCharPolyDegree(ValidationFailed):
    pass


ISSUE_ERRORS = {cls.__name__: cls for cls in (RankOutOfRange, BadCharPolyDegree)}


# hopf_engine

class HopfEngineError(GroupCohomologyError):
    module = "hopf_engine"


class CapExceeded(HopfEngineError):
    pass


class NotHopfMorphism(HopfEngineError):
    pass


# dynamics

class DynamicsError(GroupCohomologyError):
    module = "dynamics"


class BlockMismatch(DynamicsError):
    pass


class MissingCharPoly(DynamicsError):
    pass


class BadCharPolyConstantTerm(DynamicsError):
    pass


class NotPrime(DynamicsError):
    pass


# oracle

class OracleError(GroupCohomologyError):
    module = "oracle"


class TooLarge(OracleError):
    pass


class SingularCurve(OracleError):
    pass


class GroupTooLarge(OracleError):
    pass


class MolienFactoringError(OracleError):
    pass


class OracleUnavailable(OracleError):
    pass


# dsl_cli

class DslError(GroupCohomologyError):
    module = "dsl_cli"


class DslSyntaxError(DslError):
    def __init__(self, message: str, line: int, column: int, expected: Sequence[str] = ()):
        self.line = line
        self.column = column
        self.expected = list(expected)
        text = f"{line}:{column}: {message}"
        if self.expected:
            text += f" (expected one of: {', '.join(self.expected)})"
        super().__init__(text)

    @property
    def code(self) -> str:
        return "SyntaxError"


class UnknownLabel(DslError):
    pass


class ShapeMismatch(DslError):
    pass
