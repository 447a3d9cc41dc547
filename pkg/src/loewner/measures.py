"""Discrete-measure integral representations of the three function classes.

A finite atomic measure supported off the interval I gives closed-form
evaluation of the three canonical representations:

* monotone form:   f(x) = a*x + b + sum_r w * (1/(r-x) - 1/(r-x0))
* convex form:     f(x) = a*x^2 + b*x + c
                          + sum_{r>I} w * (x-x0)^2 / ((r-x)(r-x0)^2)
                          + sum_{r<I} w * (x-x0)^2 / ((x-r)(x0-r)^2)
* strong form:     f(x) = a + sum_{r>I} w/(r-x) + sum_{r<I} w/(x-r)

The integrability side conditions of the continuous theory hold automatically
for finite atom lists and are not represented.  This module also carries the
measure-level difference-quotient transform (weights scaled by 1/|x0-r|),
endpoint extension, the square substitution, and Poisson-kernel atom
recovery from boundary values of the holomorphic extension.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    AtomAtX0,
    DomainError,
    NegativeAtom,
    NonzeroMuMinus,
    NotEndpoint,
    QuadratureFailure,
    WindowContainsPole,
)
from .interval import Interval

__all__ = [
    "DiscreteMeasure", "OMRep", "OCRep", "SOCRep",
    "eval_om", "eval_oc", "eval_soc",
    "om_to_soc", "extend_at_endpoint", "substitute_square",
    "recover_atom_weight", "EndpointExtension",
]


@dataclass(frozen=True)
class DiscreteMeasure:
    """Finite atomic measure: tuple of (location, weight) with weights >= 0."""

    atoms: tuple = ()

    def __post_init__(self):
        atoms = tuple(sorted((float(r), float(w)) for r, w in self.atoms))
        locs = [r for r, _ in atoms]
        if len(set(locs)) != len(locs):
            raise ValueError("atom locations must be distinct")
        for r, w in atoms:
            if w < 0:
                raise ValueError(f"atom weight at r={r} is negative")
            if not math.isfinite(r):
                raise ValueError("atom location must be finite")
        object.__setattr__(self, "atoms", atoms)

    @property
    def total(self) -> float:
        return sum(w for _, w in self.atoms)

    def weight_at(self, r: float, tol: float = 0.0) -> float:
        for loc, w in self.atoms:
            if abs(loc - r) <= tol * (1.0 + abs(r)):
                return w
        return 0.0

    def scaled(self, factor_fn) -> "DiscreteMeasure":
        return DiscreteMeasure(tuple((r, w * factor_fn(r)) for r, w in self.atoms))


def _require_outside(measure: DiscreteMeasure, interval: Interval, side: str | None):
    for r, _ in measure.atoms:
        if interval.contains(r):
            raise ValueError(f"atom at r={r} lies inside the interval {interval}")
        if side == "+" and r <= interval.lo:
            raise ValueError(f"atom at r={r} is not to the right of {interval}")
        if side == "-" and r >= interval.hi:
            raise ValueError(f"atom at r={r} is not to the left of {interval}")


def _split_sides(measure: DiscreteMeasure, interval: Interval):
    plus = tuple((r, w) for r, w in measure.atoms if r >= interval.hi)
    minus = tuple((r, w) for r, w in measure.atoms if r <= interval.lo)
    return DiscreteMeasure(plus), DiscreteMeasure(minus)


@dataclass(frozen=True)
class OMRep:
    """Coefficient pack of the operator-monotone integral form."""

    a: float
    b: float
    x0: float
    mu: DiscreteMeasure
    interval: Interval

    def __post_init__(self):
        if self.a < 0:
            raise ValueError("slope coefficient a must be >= 0")
        if not self.interval.contains(self.x0):
            raise ValueError(f"anchor x0={self.x0} must lie in {self.interval}")
        _require_outside(self.mu, self.interval, side=None)

    def __call__(self, x):
        return eval_om(self, x)


@dataclass(frozen=True)
class OCRep:
    """Coefficient pack of the operator-convex integral form."""

    a: float
    b: float
    c: float
    x0: float
    mu_plus: DiscreteMeasure
    mu_minus: DiscreteMeasure
    interval: Interval

    def __post_init__(self):
        if self.a < 0:
            raise ValueError("quadratic coefficient a must be >= 0")
        if not self.interval.interior_contains(self.x0):
            raise ValueError(f"anchor x0={self.x0} must be interior to {self.interval}")
        _require_outside(self.mu_plus, self.interval, side="+")
        _require_outside(self.mu_minus, self.interval, side="-")

    def __call__(self, x):
        return eval_oc(self, x)


@dataclass(frozen=True)
class SOCRep:
    """Coefficient pack of the strongly-operator-convex integral form."""

    a: float
    mu_plus: DiscreteMeasure
    mu_minus: DiscreteMeasure
    interval: Interval

    def __post_init__(self):
        if self.a < 0:
            raise ValueError("constant coefficient a must be >= 0")
        _require_outside(self.mu_plus, self.interval, side="+")
        _require_outside(self.mu_minus, self.interval, side="-")

    def __call__(self, x):
        return eval_soc(self, x)


# --- evaluation ---------------------------------------------------------------

def _check_in(interval: Interval, x) -> np.ndarray:
    xs = np.asarray(x, dtype=float)
    lo_ok = (xs > interval.lo) | ((xs == interval.lo) & interval.lo_closed)
    hi_ok = (xs < interval.hi) | ((xs == interval.hi) & interval.hi_closed)
    if not np.all(lo_ok & hi_ok):
        bad = xs[~(lo_ok & hi_ok)].ravel()
        raise DomainError(f"x={bad[0]!r} outside {interval}")
    return xs


def eval_om(rep: OMRep, x):
    """Evaluate the monotone form at x (scalar or array) inside the interval."""
    xs = _check_in(rep.interval, x)
    out = rep.a * xs + rep.b
    for r, w in rep.mu.atoms:
        out = out + w * (1.0 / (r - xs) - 1.0 / (r - rep.x0))
    return out if np.ndim(x) else float(out)


def eval_soc(rep: SOCRep, x):
    """Evaluate the strong form at x; strictly positive when any mass present."""
    xs = _check_in(rep.interval, x)
    out = np.full_like(xs, rep.a, dtype=float)
    for r, w in rep.mu_plus.atoms:
        out = out + w / (r - xs)
    for r, w in rep.mu_minus.atoms:
        out = out + w / (xs - r)
    return out if np.ndim(x) else float(out)


def eval_oc(rep: OCRep, x):
    """Evaluate the convex form at x inside the interval."""
    xs = _check_in(rep.interval, x)
    x0 = rep.x0
    out = rep.a * xs**2 + rep.b * xs + rep.c
    for r, w in rep.mu_plus.atoms:
        out = out + w * (xs - x0) ** 2 / ((r - xs) * (r - x0) ** 2)
    for r, w in rep.mu_minus.atoms:
        out = out + w * (xs - x0) ** 2 / ((xs - r) * (x0 - r) ** 2)
    return out if np.ndim(x) else float(out)


# --- complex evaluation (used by the expression-tree wrappers) -----------------

def eval_om_complex(rep: OMRep, z):
    zs = np.asarray(z, dtype=complex)
    out = rep.a * zs + rep.b
    for r, w in rep.mu.atoms:
        out = out + w * (1.0 / (r - zs) - 1.0 / (r - rep.x0))
    return out if np.ndim(z) else complex(out)


def eval_soc_complex(rep: SOCRep, z):
    zs = np.asarray(z, dtype=complex)
    out = np.full_like(zs, rep.a, dtype=complex)
    for r, w in rep.mu_plus.atoms:
        out = out + w / (r - zs)
    for r, w in rep.mu_minus.atoms:
        out = out + w / (zs - r)
    return out if np.ndim(z) else complex(out)


def eval_oc_complex(rep: OCRep, z):
    zs = np.asarray(z, dtype=complex)
    x0 = rep.x0
    out = rep.a * zs**2 + rep.b * zs + rep.c
    for r, w in rep.mu_plus.atoms:
        out = out + w * (zs - x0) ** 2 / ((r - zs) * (r - x0) ** 2)
    for r, w in rep.mu_minus.atoms:
        out = out + w * (zs - x0) ** 2 / ((zs - r) * (x0 - r) ** 2)
    return out if np.ndim(z) else complex(out)


# --- derivatives ----------------------------------------------------------------

def deriv_om(rep: OMRep, x):
    xs = np.asarray(x, dtype=float)
    out = np.full_like(xs, rep.a, dtype=float)
    for r, w in rep.mu.atoms:
        out = out + w / (r - xs) ** 2
    return out if np.ndim(x) else float(out)


def deriv_soc(rep: SOCRep, x):
    xs = np.asarray(x, dtype=float)
    out = np.zeros_like(xs, dtype=float)
    for r, w in rep.mu_plus.atoms:
        out = out + w / (r - xs) ** 2
    for r, w in rep.mu_minus.atoms:
        out = out - w / (xs - r) ** 2
    return out if np.ndim(x) else float(out)


def deriv_oc(rep: OCRep, x):
    xs = np.asarray(x, dtype=float)
    x0 = rep.x0
    out = 2.0 * rep.a * xs + rep.b
    for r, w in rep.mu_plus.atoms:
        num = 2.0 * (xs - x0) * (r - xs) + (xs - x0) ** 2
        out = out + w * num / ((r - xs) ** 2 * (r - x0) ** 2)
    for r, w in rep.mu_minus.atoms:
        num = 2.0 * (xs - x0) * (xs - r) - (xs - x0) ** 2
        out = out + w * num / ((xs - r) ** 2 * (x0 - r) ** 2)
    return out if np.ndim(x) else float(out)


# --- transforms -------------------------------------------------------------------

def om_to_soc(rep: OMRep, x0: float) -> SOCRep:
    """Measure-level difference quotient: weights scaled by 1/|x0 - r|.

    The output satisfies, for every x != x0 in the interval,

        eval_soc(out, x) == (eval_om(rep, x) - eval_om(rep, x0)) / (x - x0).
    """
    if not rep.interval.closure_contains(x0):
        raise DomainError(f"center {x0} not in the closure of {rep.interval}")
    for r, _ in rep.mu.atoms:
        if r == x0:
            raise AtomAtX0(f"atom coincides with center x0={x0}")
    scaled = tuple((r, w / abs(x0 - r)) for r, w in rep.mu.atoms)
    plus, minus = _split_sides(DiscreteMeasure(scaled), rep.interval)
    return SOCRep(a=rep.a, mu_plus=plus, mu_minus=minus, interval=rep.interval)


@dataclass(frozen=True)
class EndpointExtension:
    """Extension data for f(x) = (x-b) g(x) at a finite excluded endpoint b.

    ``expr`` evaluates f on the original interval; ``value_at_b`` is the
    continuous extension f(b) = -delta (right endpoint) or +delta (left),
    where delta is the mass of the strong form's measure at b itself.
    ``quotient_rep`` is g with the boundary atom stripped: the difference
    quotient (f(x) - f(b))/(x - b) equals it identically on the interval.
    """

    expr: "object"
    b: float
    delta: float
    value_at_b: float
    rep: SOCRep = field(repr=False)
    quotient_rep: SOCRep = field(repr=False, default=None)

    def identity_residual(self, x) -> float:
        """max | (f(x)-f(b))/(x-b) - eval_soc(quotient_rep, x) | over x."""
        xs = np.asarray(x, dtype=float)
        f = (xs - self.b) * eval_soc(self.rep, xs)
        lhs = (f - self.value_at_b) / (xs - self.b)
        rhs = eval_soc(self.quotient_rep, xs)
        return float(np.max(np.abs(lhs - rhs)))


def extend_at_endpoint(rep: SOCRep, b: float) -> tuple[EndpointExtension, float]:
    """Extend f(x) = (x-b) g(x) across a finite excluded endpoint b of rep's
    interval; returns the extension data and delta = mass of the boundary atom."""
    iv = rep.interval
    right = b == iv.hi and not iv.hi_closed and math.isfinite(iv.hi)
    left = b == iv.lo and not iv.lo_closed and math.isfinite(iv.lo)
    if not (right or left):
        raise NotEndpoint(f"{b} is not a finite excluded endpoint of {iv}")
    side = rep.mu_plus if right else rep.mu_minus
    delta = side.weight_at(b, tol=1e-12)
    sign = -1.0 if right else 1.0
    value_at_b = sign * delta
    stripped = tuple((r, w) for r, w in side.atoms if r != b)
    if right:
        quotient = SOCRep(a=rep.a, mu_plus=DiscreteMeasure(stripped),
                          mu_minus=rep.mu_minus, interval=iv)
    else:
        quotient = SOCRep(a=rep.a, mu_plus=rep.mu_plus,
                          mu_minus=DiscreteMeasure(stripped), interval=iv)
    from .funexpr import MeasureSOC, MulLinear  # deferred: funexpr imports this module

    expr = MulLinear(MeasureSOC(rep), x0=b, c=0.0)
    ext = EndpointExtension(expr=expr, b=b, delta=delta, value_at_b=value_at_b,
                            rep=rep, quotient_rep=quotient)
    return ext, delta


def substitute_square(rep: OCRep) -> OCRep:
    """Convex form of g(x) = phi(x^2) from the convex form of phi.

    Requires the anchor at 0, an empty left measure, no quadratic term, and
    strictly positive atom locations.  Each atom (r, w) of the input splits
    into atoms (sqrt(r), w/(2 sqrt r)) and (-sqrt(r), w/(2 sqrt r)); the x^2
    coefficient of the output is b - sum(w / r^2).
    """
    if rep.mu_minus.atoms:
        raise NonzeroMuMinus("square substitution requires an empty left measure")
    if rep.x0 != 0.0:
        raise ValueError("square substitution requires anchor x0 = 0")
    if rep.a != 0.0:
        raise ValueError("square substitution requires no x^2 term in the input")
    for r, _ in rep.mu_plus.atoms:
        if r <= 0:
            raise NegativeAtom(f"atom location {r} must be positive")

    hi = rep.interval.hi
    if not math.isfinite(hi):
        raise ValueError("square substitution needs a finite right endpoint")
    s = math.sqrt(hi)
    out_interval = Interval(-s, s, rep.interval.hi_closed, rep.interval.hi_closed)

    nu = []
    alpha = rep.b
    for r, w in rep.mu_plus.atoms:
        root = math.sqrt(r)
        nu.append((root, w / (2.0 * root)))
        nu.append((-root, w / (2.0 * root)))
        alpha -= w / r**2
    plus = DiscreteMeasure(tuple(a for a in nu if a[0] > 0))
    minus = DiscreteMeasure(tuple(a for a in nu if a[0] < 0))
    return OCRep(a=alpha, b=0.0, c=rep.c, x0=0.0,
                 mu_plus=plus, mu_minus=minus, interval=out_interval)


# --- JSON ----------------------------------------------------------------------

def rep_to_json(rep) -> dict:
    """Serialize a representation to the measure JSON layout."""
    if isinstance(rep, OMRep):
        return {"a": rep.a, "b": rep.b, "x0": rep.x0,
                "atoms_plus": [[r, w] for r, w in rep.mu.atoms if r >= rep.interval.hi],
                "atoms_minus": [[r, w] for r, w in rep.mu.atoms if r <= rep.interval.lo],
                "interval": rep.interval.to_json()}
    if isinstance(rep, OCRep):
        return {"a": rep.a, "b": rep.b, "c": rep.c, "x0": rep.x0,
                "atoms_plus": [[r, w] for r, w in rep.mu_plus.atoms],
                "atoms_minus": [[r, w] for r, w in rep.mu_minus.atoms],
                "interval": rep.interval.to_json()}
    if isinstance(rep, SOCRep):
        return {"a": rep.a,
                "atoms_plus": [[r, w] for r, w in rep.mu_plus.atoms],
                "atoms_minus": [[r, w] for r, w in rep.mu_minus.atoms],
                "interval": rep.interval.to_json()}
    raise TypeError(f"not a representation: {type(rep).__name__}")


def rep_from_json(d: dict, kind: str):
    """Parse a representation dict; kind is 'om', 'oc', or 'soc'."""
    interval = Interval.from_json(d["interval"])
    plus = tuple((float(r), float(w)) for r, w in d.get("atoms_plus", ()))
    minus = tuple((float(r), float(w)) for r, w in d.get("atoms_minus", ()))
    if kind == "om":
        return OMRep(a=float(d["a"]), b=float(d["b"]), x0=float(d["x0"]),
                     mu=DiscreteMeasure(plus + minus), interval=interval)
    if kind == "oc":
        return OCRep(a=float(d["a"]), b=float(d["b"]), c=float(d["c"]),
                     x0=float(d["x0"]), mu_plus=DiscreteMeasure(plus),
                     mu_minus=DiscreteMeasure(minus), interval=interval)
    if kind == "soc":
        return SOCRep(a=float(d["a"]), mu_plus=DiscreteMeasure(plus),
                      mu_minus=DiscreteMeasure(minus), interval=interval)
    raise ValueError(f"unknown representation kind {kind!r}")


# --- Poisson-kernel atom recovery ---------------------------------------------

def _adaptive_simpson(fn, a: float, b: float, tol: float, max_depth: int = 60):
    """Recursive adaptive Simpson's rule with a Richardson error estimate."""
    fa, fb = fn(a), fn(b)
    m = 0.5 * (a + b)
    fm = fn(m)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    def recurse(a, fa, m, fm, b, fb, whole, tol, depth):
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = fn(lm), fn(rm)
        left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
        right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
        delta = left + right - whole
        if abs(delta) <= 15.0 * tol:
            return left + right + delta / 15.0
        if depth >= max_depth:
            raise QuadratureFailure(
                f"adaptive Simpson hit depth {max_depth} on [{a}, {b}]")
        half = 0.5 * tol
        return (recurse(a, fa, lm, flm, m, fm, left, half, depth + 1)
                + recurse(m, fm, rm, frm, b, fb, right, half, depth + 1))

    return recurse(a, fa, m, fm, b, fb, whole, tol, 0)


def recover_atom_weight(f, r: float, window: tuple, eps_list=(1e-2, 1e-3, 1e-4),
                        side: str = "+") -> float:
    """Recover the weight of the atom at r from the imaginary part of f's
    holomorphic extension just above the real axis.

    For each eps, integrates (1/pi) Im f(t + i*eps) over the window with
    adaptive Simpson (split at r, absolute tolerance 1e-10), then applies
    two-point Richardson extrapolation in eps to remove the O(eps) window
    leakage.  ``side`` = "-" flips the sign for left-measure atoms.
    """
    lo, hi = float(window[0]), float(window[1])
    if not lo < r < hi:
        raise ValueError(f"window ({lo}, {hi}) must contain the atom location {r}")
    eps_list = sorted(float(e) for e in eps_list)
    if len(eps_list) < 2:
        raise ValueError("need at least two eps values for extrapolation")
    guard = 10.0 * max(eps_list)
    if min(r - lo, hi - r) < guard:
        raise WindowContainsPole(
            f"atom at {r} within {guard} of the window boundary")
    sgn = {"+": 1.0, "-": -1.0}[side]

    def mass(eps: float) -> float:
        def integrand(t: float) -> float:
            return sgn * f.eval_complex(complex(t, eps)).imag / math.pi

        return (_adaptive_simpson(integrand, lo, r, 5e-11)
                + _adaptive_simpson(integrand, r, hi, 5e-11))

    masses = [mass(e) for e in eps_list]
    e1, e2 = eps_list[1], eps_list[0]
    m1, m2 = masses[1], masses[0]
    # leakage is O(eps): eliminate the linear term with the two smallest eps
    return (e1 * m2 - e2 * m1) / (e1 - e2)
