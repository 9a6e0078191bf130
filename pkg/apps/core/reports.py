"""
Verification Reports
Residual reports returned by every verification routine, and their JSON,
CSV and text renderings. Renderings are deterministic: sorted keys, repr
floats, no timestamps.
"""

import csv
import io
import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Sequence

import indeftheta

logger = logging.getLogger(__name__)


@dataclass
class VerificationReport:
    """
    One check: both sides, the residual, the verdict and the parameters.

    `rows` carries tabular output (coefficient tables, per-t errors).
    """
    check: str
    lhs: Any = None
    rhs: Any = None
    residual: float = 0.0
    passed: bool = True
    params: Dict[str, Any] = field(default_factory=dict)
    rows: List[Dict[str, Any]] = field(default_factory=list)

    @classmethod
    def compare(cls, check: str, lhs: complex, rhs: complex, tol: float,
                params: Optional[Dict[str, Any]] = None, relative: bool = True) -> "VerificationReport":
        """Passes when |lhs - rhs| <= tol (1 + |lhs|), or <= tol when not relative."""
        residual = abs(lhs - rhs)
        bound = tol * (1 + abs(lhs)) if relative else tol
        return cls(check, lhs, rhs, residual, residual <= bound, dict(params or {}, tol=tol))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'check': self.check,
            'lhs': plain(self.lhs),
            'rhs': plain(self.rhs),
            'residual': plain(self.residual),
            'passed': self.passed,
            'params': plain(self.params),
            'rows': plain(self.rows),
        }


def combine(check: str, reports: Sequence[VerificationReport],
            params: Optional[Dict[str, Any]] = None) -> VerificationReport:
    """A report passing when every part passes; parts become rows."""
    rows = [r.to_dict() for r in reports]
    residual = max((r.residual for r in reports), default=0.0)
    return VerificationReport(check, None, None, residual, all(r.passed for r in reports),
                              dict(params or {}), rows)


def plain(value: Any) -> Any:
    """JSON-ready copy: complex as {re, im}, Fraction as "p/q"."""
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        return value if value == value and abs(value) != float('inf') else str(value)
    if isinstance(value, complex):
        return {'re': plain(value.real), 'im': plain(value.imag)}
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, Mapping):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    if hasattr(value, 'to_json'):
        return value.to_json()
    if hasattr(value, 'item'):
        return plain(value.item())
    return str(value)


# ============================================================================
# RENDERING
# ============================================================================

def render_json(report: VerificationReport, config: Mapping[str, Any]) -> str:
    payload = {
        'version': indeftheta.__version__,
        'config': plain(config),
        'report': report.to_dict(),
    }
    return json.dumps(payload, sort_keys=True, indent=2) + '\n'


def render_csv(report: VerificationReport, config: Mapping[str, Any]) -> str:
    """The rows as a table; a report without rows becomes a single row."""
    rows = [_flatten(r) for r in report.to_dict()['rows']] or [_flatten({
        'check': report.check,
        'lhs': plain(report.lhs),
        'rhs': plain(report.rhs),
        'residual': plain(report.residual),
        'passed': report.passed,
    })]
    columns = sorted({k for r in rows for k in r})
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=columns, lineterminator='\n')
    writer.writeheader()
    for r in rows:
        writer.writerow(r)
    return buffer.getvalue()


def render_text(report: VerificationReport, config: Mapping[str, Any]) -> str:
    data = report.to_dict()
    lines = [
        f"indeftheta {indeftheta.__version__}",
        f"check: {data['check']}",
        f"passed: {data['passed']}",
        f"residual: {data['residual']!r}",
    ]
    if data['lhs'] is not None:
        lines.append(f"lhs: {json.dumps(data['lhs'], sort_keys=True)}")
        lines.append(f"rhs: {json.dumps(data['rhs'], sort_keys=True)}")
    for key in sorted(data['params']):
        lines.append(f"  {key} = {json.dumps(data['params'][key], sort_keys=True)}")
    for row in data['rows']:
        lines.append('  ' + ', '.join(f"{k}={v}" for k, v in sorted(_flatten(row).items())))
    return '\n'.join(lines) + '\n'


RENDERERS = {
    'json': render_json,
    'csv': render_csv,
    'text': render_text,
}


def _flatten(row: Mapping[str, Any], prefix: str = '') -> Dict[str, Any]:
    out: Dict[str, Any] = {}
    for k, v in row.items():
        key = f"{prefix}{k}"
        if isinstance(v, Mapping):
            out.update(_flatten(v, key + '.'))
        elif isinstance(v, list):
            out[key] = json.dumps(v, sort_keys=True)
        else:
            out[key] = v
    return out
