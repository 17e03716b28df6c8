from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class IdentityCheck:
    """One verified identity: its residual against the tolerance it must meet."""

    name: str
    residual: float
    tolerance: float
    exact: bool = False  # exact checks pass only with a zero residual
    detail: Optional[str] = None

    @property
    def passed(self) -> bool:
        if not math.isfinite(self.residual):
            return False
        if self.exact:
            return self.residual == 0
        return self.residual <= self.tolerance

    def to_dict(self) -> dict:
        payload = {
            "name": self.name,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "exact": self.exact,
            "passed": self.passed,
        }
        if self.detail:
            payload["detail"] = self.detail
        return payload
