"""
Report - CLI 输出的结构化报告

所有数值都以十进制字符串保存 (分数写成 "p/q")，JSON 中永远没有浮点数；
model_validate_json(report.model_dump_json()) 得到完全相同的报告。
文本模式把同一份报告渲染成对齐的表格。
"""

from fractions import Fraction
from typing import Dict, Iterable, List, Literal, Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field

from .errors import DslSyntaxError, GroupCohomologyError

Status = Literal["ok", "failed", "error"]


class _Frozen(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid", strict=True)


class Table(_Frozen):
    title: str
    columns: List[str]
    rows: List[List[str]] = Field(default_factory=list)


class ErrorInfo(_Frozen):
    code: str
    message: str
    hint: Optional[str] = None
    line: Optional[str] = None
    column: Optional[str] = None
    expected: List[str] = Field(default_factory=list)


class Report(_Frozen):
    command: str
    status: Status = "ok"
    expression: Optional[str] = None
    values: Dict[str, str] = Field(default_factory=dict)
    tables: List[Table] = Field(default_factory=list)
    witness: Optional[Dict[str, str]] = None
    error: Optional[ErrorInfo] = None

    @property
    def exit_code(self) -> int:
        return {"ok": 0, "failed": 1, "error": 2}[self.status]


def num(value) -> str:
    """Exact decimal / fraction text for int, Fraction, bool and sympy rationals."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, Fraction):
        return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    if hasattr(value, "p") and hasattr(value, "q"):
        return num(Fraction(int(value.p), int(value.q)))
    raise TypeError(f"not an exact number: {value!r}")


def parse_num(text: str) -> Fraction:
    return Fraction(text)


def nums(values: Iterable) -> List[str]:
    return [num(v) for v in values]


def table(title: str, columns: Sequence[str], rows: Iterable[Sequence]) -> Table:
    return Table(
        title=title,
        columns=list(columns),
        rows=[[cell if isinstance(cell, str) else num(cell) for cell in row] for row in rows],
    )


def error_report(command: str, exc: GroupCohomologyError, expression: Optional[str] = None) -> Report:
    info = ErrorInfo(code=exc.qualified_code, message=exc.message, hint=exc.hint)
    if isinstance(exc, DslSyntaxError):
        info = info.model_copy(update={
            "line": str(exc.line), "column": str(exc.column), "expected": list(exc.expected),
        })
    return Report(command=command, status="error", expression=expression, error=info)


def render_text(report: Report) -> str:
    lines: List[str] = []
    header = report.command if report.expression is None else f"{report.command}: {report.expression}"
    lines.append(f"{header} [{report.status}]")

    if report.error is not None:
        err = report.error
        location = f" at {err.line}:{err.column}" if err.line else ""
        lines.append(f"error {err.code}{location}: {err.message}")
        if err.expected:
            lines.append(f"  expected one of: {', '.join(err.expected)}")
        if err.hint:
            lines.append(f"  hint: {err.hint}")

    if report.values:
        width = max(len(key) for key in report.values)
        for key, value in report.values.items():
            lines.append(f"  {key.ljust(width)}  {value}")

    for t in report.tables:
        lines.append("")
        lines.append(t.title)
        widths = [len(c) for c in t.columns]
        for row in t.rows:
            widths = [max(w, len(cell)) for w, cell in zip(widths, row)]
        lines.append("  " + "  ".join(c.ljust(w) for c, w in zip(t.columns, widths)).rstrip())
        lines.append("  " + "  ".join("-" * w for w in widths))
        for row in t.rows:
            lines.append("  " + "  ".join(cell.rjust(w) for cell, w in zip(row, widths)).rstrip())

    if report.witness:
        lines.append("")
        lines.append("witness")
        for key, value in report.witness.items():
            lines.append(f"  {key}: {value}")
    return "\n".join(lines)


def render(report: Report, as_json: bool) -> str:
    if as_json:
        return report.model_dump_json(indent=2)
    return render_text(report)
