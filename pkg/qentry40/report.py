"""
report.py
---------

Turns a list of ``IdentityResult`` records into the report written by the
command line: a JSON document or a ``rich`` table.

Both renderings are built from the same string records.  Numbers are
formatted with ``mpmath.nstr`` at the full working precision, never as
binary floats, so a JSON report carries every digit that was computed
and two runs with the same seed produce byte-identical files.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

try:
    import mpmath
except ImportError as e:
    raise RuntimeError(
        "mpmath is required for qentry40.report but is not installed. Please install mpmath >= 1.3"
    ) from e

try:
    from rich.console import Console
    from rich.table import Table
except ImportError as e:
    raise RuntimeError(
        "rich is required for qentry40.report but is not installed. Please install rich >= 13"
    ) from e

from .verify import IdentityResult, SampleConfig

#: digits printed for residuals and tolerances
SHORT_DIGITS = 6


def _digits(precision_bits: int) -> int:
    return int(precision_bits * 0.30103) + 1


def format_number(value: Any, digits: int) -> Optional[str]:
    """Decimal string for a real or complex number; ``None`` stays ``None``."""
    if value is None:
        return None
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, (float, complex)):
        value = mpmath.mpmathify(value)
    # values carry the type of their own MPContext, so test the payload
    if hasattr(value, "_mpc_") and value.imag == 0:
        value = value.real
    return mpmath.nstr(value, digits)


def _format_any(value: Any, digits: int) -> Any:
    if isinstance(value, str) or value is None:
        return value
    if isinstance(value, (list, tuple)):
        return [_format_any(v, digits) for v in value]
    if isinstance(value, dict):
        return {str(k): _format_any(v, digits) for k, v in sorted(value.items())}
    return format_number(value, digits)


def _flatten(value: Any) -> str:
    """One-line text of an already formatted record field."""
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, dict):
        return ", ".join(f"{k}={_flatten(v)}" for k, v in value.items())
    if isinstance(value, list):
        return "[" + ", ".join(_flatten(v) for v in value) + "]"
    return str(value)


def result_record(result: IdentityResult, digits: int) -> Dict[str, Any]:
    """One entry of ``results`` in the JSON schema."""
    return {
        "id": result.id,
        "suite": result.suite,
        "trial": result.trial,
        "params": _format_any(result.params, digits),
        "lhs": format_number(result.lhs, digits),
        "rhs": format_number(result.rhs, digits),
        "residual": format_number(result.residual, SHORT_DIGITS),
        "tol": format_number(result.tol, SHORT_DIGITS),
        "pass": result.passed,
        "rejects": result.rejects,
        "gates": {k: bool(v) for k, v in sorted(result.gates.items())},
        "diagnostics": _format_any(result.diagnostics, SHORT_DIGITS),
    }


@dataclass
class VerifyReport:
    """Meta data, per-trial records and the summary of one run."""

    meta: Dict[str, Any]
    results: List[Dict[str, Any]]
    summary: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def build(cls, config: SampleConfig, suite: str, results: Sequence[IdentityResult]) -> "VerifyReport":
        digits = _digits(config.precision_bits)
        limit_step = mpmath.ldexp(1, -(config.precision_bits // 3))
        meta = {
            "seed": config.seed,
            "precision": config.precision_bits,
            "trials": config.trials,
            "suite": suite,
            "q_samples": [format_number(r.params.get("q"), digits) for r in results if "q" in r.params],
            "limit_step": format_number(limit_step, SHORT_DIGITS),
        }
        records = [result_record(r, digits) for r in results]
        residuals = [r.residual for r in results if r.residual is not None]
        summary = {
            "total": len(results),
            "failures": sum(1 for r in results if not r.passed),
            "rejects": sum(r.rejects for r in results),
            "max_residual": format_number(max(residuals), SHORT_DIGITS) if residuals else None,
        }
        return cls(meta, records, summary)

    @property
    def passed(self) -> bool:
        return self.summary.get("failures", 0) == 0

    def to_json(self) -> str:
        payload = {"meta": self.meta, "results": self.results, "summary": self.summary}
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    def render_text(self, width: int = 140) -> str:
        """The same records as a ``rich`` table plus one detail block per trial.

        Long values (parameters, both sides, diagnostics) go in the detail
        lines, printed unwrapped, so every number of ``to_json`` shows up
        verbatim.
        """
        table = Table(title=f"qentry40 verification: suite {self.meta['suite']}, seed {self.meta['seed']}")
        table.add_column("id")
        table.add_column("trial", justify="right")
        table.add_column("residual", justify="right")
        table.add_column("tol", justify="right")
        table.add_column("rejects", justify="right")
        table.add_column("pass")
        for record in self.results:
            status = "ok" if record["pass"] else "FAIL"
            failed_gates = [name for name, ok in record["gates"].items() if not ok]
            if failed_gates:
                status += " (" + ", ".join(failed_gates) + ")"
            table.add_row(
                record["id"],
                str(record["trial"]),
                record["residual"] or "-",
                record["tol"] or "-",
                str(record["rejects"]),
                status,
            )
        buffer = io.StringIO()
        console = Console(file=buffer, width=width, no_color=True, force_terminal=False)
        console.print(table)
        for record in self.results:
            lines = [
                f"{record['id']}[{record['trial']}]",
                f"  lhs: {_flatten(record['lhs'])}",
                f"  rhs: {_flatten(record['rhs'])}",
                f"  params: {_flatten(record['params'])}",
                f"  diagnostics: {_flatten(record['diagnostics'])}",
            ]
            for line in lines:
                console.print(line, soft_wrap=True, markup=False, highlight=False)
        meta = self.meta
        console.print(
            f"seed {meta['seed']}, trials {meta['trials']}, limit step {meta['limit_step']}, "
            f"q samples: {_flatten(meta['q_samples'])}",
            soft_wrap=True,
            markup=False,
            highlight=False,
        )
        console.print(
            f"total {self.summary['total']}, failures {self.summary['failures']}, "
            f"rejects {self.summary['rejects']}, max residual {self.summary['max_residual']}, "
            f"precision {meta['precision']} bits",
            soft_wrap=True,
            markup=False,
            highlight=False,
        )
        return buffer.getvalue()


__all__ = ["VerifyReport", "format_number", "result_record"]
