"""Non-degenerate real intervals with open/closed endpoint flags.

Endpoints may be infinite (``math.inf`` sentinels); a closed endpoint must be
finite.  Instances are immutable and hashable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import EmptyDomain

__all__ = ["Interval", "REAL_LINE"]


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    lo_closed: bool = False
    hi_closed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "lo", float(self.lo))
        object.__setattr__(self, "hi", float(self.hi))
        if math.isnan(self.lo) or math.isnan(self.hi):
            raise EmptyDomain("interval endpoint is NaN")
        if not self.lo < self.hi:
            raise EmptyDomain(f"degenerate interval [{self.lo}, {self.hi}]")
        if self.lo_closed and math.isinf(self.lo):
            raise EmptyDomain("closed endpoint must be finite")
        if self.hi_closed and math.isinf(self.hi):
            raise EmptyDomain("closed endpoint must be finite")

    # --- membership ---------------------------------------------------------

    def contains(self, x: float) -> bool:
        if x < self.lo or x > self.hi:
            return False
        if x == self.lo:
            return self.lo_closed
        if x == self.hi:
            return self.hi_closed
        return True

    def __contains__(self, x) -> bool:
        return self.contains(float(x))

    def interior_contains(self, x: float) -> bool:
        return self.lo < x < self.hi

    def closure_contains(self, x: float) -> bool:
        if math.isinf(x):
            return False
        return self.lo <= x <= self.hi

    def is_endpoint(self, x: float) -> bool:
        return x == self.lo or x == self.hi

    def contains_interval(self, other: "Interval") -> bool:
        """Whether ``other`` is a subset of this interval."""
        if other.lo < self.lo or (other.lo == self.lo and other.lo_closed and not self.lo_closed):
            return False
        if other.hi > self.hi or (other.hi == self.hi and other.hi_closed and not self.hi_closed):
            return False
        return True

    # --- derived intervals ----------------------------------------------------

    def without_endpoint(self, x: float) -> "Interval":
        """Open the endpoint at ``x`` (domain rule for difference quotients)."""
        if x == self.lo:
            return Interval(self.lo, self.hi, False, self.hi_closed)
        if x == self.hi:
            return Interval(self.lo, self.hi, self.lo_closed, False)
        return self

    def closure(self) -> "Interval":
        return Interval(
            self.lo, self.hi,
            lo_closed=not math.isinf(self.lo),
            hi_closed=not math.isinf(self.hi),
        )

    @property
    def bounded(self) -> bool:
        return not (math.isinf(self.lo) or math.isinf(self.hi))

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def clip(self, length: float) -> "Interval":
        """Bounded sub-window of at most ``length``: anchored at a finite end,
        or centered at 0 when both ends are infinite."""
        lo, hi = self.lo, self.hi
        if math.isinf(lo) and math.isinf(hi):
            return Interval(-length / 2, length / 2, False, False)
        if math.isinf(hi):
            return Interval(lo, lo + length, self.lo_closed, False)
        if math.isinf(lo):
            return Interval(hi - length, hi, False, self.hi_closed)
        if hi - lo <= length:
            return self
        return Interval(lo, lo + length, self.lo_closed, False)

    # --- serialization ----------------------------------------------------------

    def to_json(self) -> dict:
        def enc(v):
            if v == math.inf:
                return "inf"
            if v == -math.inf:
                return "-inf"
            return v

        return {
            "lo": enc(self.lo),
            "hi": enc(self.hi),
            "lo_closed": self.lo_closed,
            "hi_closed": self.hi_closed,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Interval":
        def dec(v):
            if v == "inf":
                return math.inf
            if v == "-inf":
                return -math.inf
            return float(v)

        return cls(
            dec(obj["lo"]), dec(obj["hi"]),
            bool(obj.get("lo_closed", False)), bool(obj.get("hi_closed", False)),
        )

    def __str__(self):
        lb = "[" if self.lo_closed else "("
        rb = "]" if self.hi_closed else ")"
        return f"{lb}{self.lo}, {self.hi}{rb}"


REAL_LINE = Interval(-math.inf, math.inf)
