"""Grid scans over intervals: sign checks, endpoint limits, boundedness.

These are the desk-scale decidable proxies used wherever a contract quantifies
over a whole interval (positivity for the negative-reciprocal transform,
boundedness for backward-process shifts, zero detection for pipeline
termination).  Unbounded intervals are clipped to a long window before
scanning; open endpoints are approached geometrically so blow-ups and limits
near the boundary are seen even on a coarse linear grid.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import NoFiniteLimit, NotNegative, NotPositive, Unbounded, ZeroFunction
from .interval import Interval

SCAN_POINTS = 1001
SCAN_WINDOW = 1e6
ZERO_TOL = 1e-13

# geometric offsets used both as near-endpoint samples and for limit estimation
_APPROACH_STEPS = (1e-2, 1e-3, 1e-4, 1e-5, 1e-6)


def scan_grid(domain: Interval, n: int = SCAN_POINTS, window: float = SCAN_WINDOW) -> np.ndarray:
    """Scan points: an ``n``-point linear grid on the (clipped) interval, closed
    endpoints included, open endpoints replaced by interior offsets, plus
    geometric approach points near each finite open endpoint."""
    w = domain.clip(window)
    lo, hi = w.lo, w.hi
    width = hi - lo
    eps = 1e-9 * (width + abs(lo) + abs(hi))
    a = lo if w.lo_closed else lo + eps
    b = hi if w.hi_closed else hi - eps
    pts = list(np.linspace(a, b, n))
    for step in _APPROACH_STEPS:
        if not w.lo_closed:
            pts.append(lo + step * width)
        if not w.hi_closed:
            pts.append(hi - step * width)
    arr = np.unique(np.asarray(pts, dtype=float))
    return arr[(arr >= lo) & (arr <= hi)]


def endpoint_limit(fn, domain: Interval, endpoint: float) -> float:
    """Numeric one-sided limit of ``fn`` at a finite endpoint of ``domain``.

    Evaluates along five geometric approach points and Richardson-style checks
    that successive values stabilize.  Raises NoFiniteLimit when they grow or
    refuse to settle.
    """
    w = domain.clip(SCAN_WINDOW)
    width = w.hi - w.lo
    sign = +1.0 if endpoint == domain.lo else -1.0
    xs = [endpoint + sign * step * width for step in _APPROACH_STEPS]
    vals = [float(fn(x)) for x in xs]
    if any(not math.isfinite(v) for v in vals):
        raise NoFiniteLimit(f"no finite limit at {endpoint}")
    diffs = [abs(vals[i + 1] - vals[i]) for i in range(len(vals) - 1)]
    scale = 1.0 + max(abs(v) for v in vals)
    # growing magnitudes or non-shrinking increments mean divergence
    if abs(vals[-1]) > 1e8 * (1.0 + abs(vals[0])):
        raise NoFiniteLimit(f"values blow up approaching {endpoint}")
    if diffs[-1] > max(2.0 * diffs[0], 1e-3 * scale):
        raise NoFiniteLimit(f"values do not settle approaching {endpoint}")
    return vals[-1]


def _grid_values(fn, domain: Interval, n: int, window: float):
    xs = scan_grid(domain, n, window)
    return xs, np.asarray(fn(xs), dtype=float)


def is_zero_on_grid(fn, domain: Interval, tol: float = ZERO_TOL) -> bool:
    _, vals = _grid_values(fn, domain, SCAN_POINTS, SCAN_WINDOW)
    return bool(np.all(np.abs(vals) <= tol))


def check_positive(fn, domain: Interval, reject_zero: bool = True) -> None:
    """Positivity scan backing the negative-reciprocal transform.

    Requires fn > 0 at every grid point; at finite open endpoints only the
    limit is constrained (it may be 0 but not negative).  Raises ZeroFunction
    when the function vanishes identically, NotPositive otherwise.
    """
    xs, vals = _grid_values(fn, domain, SCAN_POINTS, SCAN_WINDOW)
    if reject_zero and np.all(np.abs(vals) <= ZERO_TOL):
        raise ZeroFunction("function is identically zero on the scan grid")
    bad = np.flatnonzero(vals <= 0.0)
    if bad.size:
        i = int(bad[np.argmin(vals[bad])])
        raise NotPositive(float(xs[i]), float(vals[i]))
    for end, closed in ((domain.lo, domain.lo_closed), (domain.hi, domain.hi_closed)):
        if math.isfinite(end) and not closed:
            try:
                lim = endpoint_limit(fn, domain, end)
            except NoFiniteLimit:
                continue  # blow-up at an excluded endpoint cannot be negative here: grid saw it
            if lim < -1e-10 * (1.0 + abs(lim)):
                raise NotPositive(end, lim)


def check_negative(fn, domain: Interval) -> None:
    """Mirror of :func:`check_positive` for the f < 0 convention."""
    try:
        check_positive(lambda x: -np.asarray(fn(x)), domain)
    except NotPositive as e:
        raise NotNegative(e.point, -e.value) from None


def grid_sup(fn, domain: Interval, n: int = SCAN_POINTS, window: float = SCAN_WINDOW):
    """(sup, inf) of fn over the scan grid."""
    _, vals = _grid_values(fn, domain, n, window)
    if not np.all(np.isfinite(vals)):
        raise Unbounded("non-finite value on scan grid")
    return float(np.max(vals)), float(np.min(vals))


def check_bounded(fn, domain: Interval) -> tuple[float, float]:
    """Refinement-stable supremum check.

    Scans at 1001 then 4001 points (the refined scan also widens the clip
    window fourfold when the interval is unbounded); a >10% jump in the
    supremum magnitude, or a divergent endpoint limit, raises Unbounded.
    Returns (sup, inf) from the refined scan.
    """
    sup1, inf1 = grid_sup(fn, domain, SCAN_POINTS, SCAN_WINDOW)
    window2 = SCAN_WINDOW if domain.bounded else 4 * SCAN_WINDOW
    sup2, inf2 = grid_sup(fn, domain, 4 * SCAN_POINTS - 3, window2)
    scale = 1.0 + max(abs(sup1), abs(inf1))
    if sup2 - sup1 > 0.10 * scale or inf1 - inf2 > 0.10 * scale:
        raise Unbounded("grid supremum diverges under refinement")
    for end, closed in ((domain.lo, domain.lo_closed), (domain.hi, domain.hi_closed)):
        if math.isfinite(end) and not closed:
            try:
                endpoint_limit(fn, domain, end)
            except NoFiniteLimit:
                raise Unbounded(f"function diverges at endpoint {end}") from None
    return sup2, inf2
