"""Sample means with standard errors, and the tolerance rule they are judged by."""
import math
from dataclasses import dataclass
from typing import Any, Dict, Optional

import numpy as np


@dataclass(frozen=True)
class Estimate:
    mean: float
    std_error: float
    n: int

    @classmethod
    def from_samples(cls, samples: np.ndarray) -> "Estimate":
        n = int(samples.size)
        if n == 0:
            return cls(float("nan"), float("nan"), 0)
        mean = float(np.sum(samples) / n)
        if n == 1:
            return cls(mean, float("inf"), 1)
        return cls(mean, float(np.std(samples, ddof=1) / math.sqrt(n)), n)

    def band(self, tolerance: float) -> float:
        """max(3 SE, tolerance)."""
        return max(3.0 * self.std_error, tolerance)

    def agrees_with(self, target: float, tolerance: float) -> bool:
        return abs(self.mean - target) <= self.band(tolerance)

    def to_dict(self, target: Optional[float] = None, tolerance: Optional[float] = None) -> Dict[str, Any]:
        row: Dict[str, Any] = {"mean": self.mean, "std_error": self.std_error, "n": self.n}
        if target is not None:
            row["target"] = target
            if tolerance is not None:
                row["passed"] = self.agrees_with(target, tolerance)
        return row
