"""Suite reports shared by the verification routines and the CLI."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional

from .exact import format_scalar

PASS = "pass"
FAIL = "fail"


@dataclass
class Report:
    name: str
    anchor: str
    status: str = PASS
    witnesses: List[Dict[str, Any]] = field(default_factory=list)
    certified_window: Optional[int] = None
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status == PASS

    def __bool__(self) -> bool:
        return self.ok

    def fail(self, **witness) -> "Report":
        self.status = FAIL
        self.witnesses.append(witness)
        return self

    def to_dict(self) -> Dict[str, Any]:
        out = {
            "name": self.name,
            "paper_anchor": self.anchor,
            "status": self.status,
            "witnesses": [jsonable(w) for w in self.witnesses],
            "certified_window": self.certified_window,
        }
        if self.details:
            out["details"] = jsonable(self.details)
        return out

    def summary(self) -> str:
        line = f"[{self.status.upper()}] {self.name}"
        if self.certified_window is not None:
            line += f" (window {self.certified_window})"
        return line


def jsonable(obj: Any) -> Any:
    """Convert scalars, atoms and containers into plain JSON values.

    Rationals become "p/q" strings so that no float ever appears in output.
    """
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, Fraction):
        return format_scalar(obj)
    if hasattr(obj, "label") and callable(obj.label):
        return obj.label()
    if hasattr(obj, "to_dict") and callable(obj.to_dict):
        return jsonable(obj.to_dict())
    if isinstance(obj, dict):
        return {str(jsonable(k)) if not isinstance(k, str) else k: jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if hasattr(obj, "items"):
        return {str(jsonable(k)): jsonable(v) for k, v in obj.items()}
    return str(obj)
