"""Immutable expression trees for the scalar functions under study.

A tree is built from leaf nodes (constants, affine maps, powers, reciprocal,
named catalog functions, polynomial quotients, discrete-measure forms) and
transform nodes (difference quotient, negated reciprocal, multiply-by-linear,
composition).  Every node knows its real interval of definition and supports
three evaluation channels:

* ``eval_real(x)``     -- values on the domain (vectorized over arrays),
* ``eval_complex(z)``  -- the holomorphic extension on the open upper
                          half-plane, agreeing with eval_real as Im z -> 0+,
* ``eval_deriv(x)``    -- first derivative at interior points, symbolic rules
                          per node with a 4th-order central-difference
                          fallback (step 1e-5 * (1 + |x|)).

Nodes are frozen dataclasses: value-equal trees compare equal and hash, and
every tree round-trips through ``to_json``/``from_json``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import (
    BranchError,
    DomainError,
    NotNegative,
    NotPositive,
    OutsideClosure,
    UnsupportedNode,
    ZeroFunction,
)
from .interval import REAL_LINE, Interval
from .measures import (
    OCRep,
    OMRep,
    SOCRep,
    deriv_oc,
    deriv_om,
    deriv_soc,
    eval_oc,
    eval_oc_complex,
    eval_om,
    eval_om_complex,
    eval_soc,
    eval_soc_complex,
    rep_from_json,
    rep_to_json,
)
from .scanning import check_negative, check_positive, endpoint_limit

__all__ = [
    "FunctionExpr", "Constant", "Affine", "Power", "Reciprocal", "Catalog",
    "Quotient", "DiffQuot", "NegRecip", "MulLinear", "Compose",
    "MeasureOM", "MeasureOC", "MeasureSOC",
    "identity", "to_json", "from_json", "CATALOG",
]

DERIV_STEP = 1e-5


def _central_diff(fn, xs, bounds=None):
    """4th-order five-point central difference, step 1e-5 * (1 + |x|).

    The step shrinks near finite domain boundaries so samples stay inside.
    """
    h = DERIV_STEP * (1.0 + np.abs(xs))
    if bounds is not None:
        lo, hi = bounds
        room = np.full_like(xs, np.inf)
        if math.isfinite(lo):
            room = np.minimum(room, xs - lo)
        if math.isfinite(hi):
            room = np.minimum(room, hi - xs)
        h = np.minimum(h, 0.25 * room)
    return (-fn(xs + 2 * h) + 8 * fn(xs + h) - 8 * fn(xs - h) + fn(xs - 2 * h)) / (12 * h)


class FunctionExpr:
    """Base class: evaluation entry points with domain checking.

    Subclasses provide ``domain`` (field or property) plus the unchecked
    array kernels ``_val`` / ``_cval`` / ``_dval``.
    """

    kind = "abstract"

    def eval_real(self, x):
        xs = np.asarray(x, dtype=float)
        self._require_in_domain(xs)
        out = self._val(xs)
        return float(out) if np.ndim(x) == 0 else out

    def eval_complex(self, z):
        zs = np.asarray(z, dtype=complex)
        if np.any(zs.imag <= 0):
            bad = zs[zs.imag <= 0].ravel()[0]
            raise DomainError(f"z={bad} not in the open upper half-plane")
        out = self._cval(zs)
        return complex(out) if np.ndim(z) == 0 else out

    def eval_deriv(self, x):
        xs = np.asarray(x, dtype=float)
        dom = self.domain
        lo_ok = xs > dom.lo
        hi_ok = xs < dom.hi
        if not np.all(lo_ok & hi_ok):
            bad = xs[~(lo_ok & hi_ok)].ravel()[0]
            raise DomainError(f"x={bad!r} not interior to {dom}")
        out = self._dval(xs)
        return float(out) if np.ndim(x) == 0 else out

    def _require_in_domain(self, xs):
        dom = self.domain
        lo_ok = (xs > dom.lo) | ((xs == dom.lo) & dom.lo_closed)
        hi_ok = (xs < dom.hi) | ((xs == dom.hi) & dom.hi_closed)
        ok = lo_ok & hi_ok
        if not np.all(ok):
            bad = xs[~ok].ravel()[0]
            raise DomainError(f"x={bad!r} outside domain {dom}")

    def _numeric_dval(self, xs):
        dom = self.domain
        return _central_diff(self._val, xs, bounds=(dom.lo, dom.hi))

    def to_json(self) -> dict:
        raise NotImplementedError

    def __call__(self, x):
        return self.eval_real(x)


# --- leaves --------------------------------------------------------------------

@dataclass(frozen=True)
class Constant(FunctionExpr):
    c: float
    domain: Interval = REAL_LINE
    kind = "constant"

    def __post_init__(self):
        object.__setattr__(self, "c", float(self.c))

    def _val(self, xs):
        return np.full_like(xs, self.c)

    def _cval(self, zs):
        return np.full_like(zs, self.c, dtype=complex)

    def _dval(self, xs):
        return np.zeros_like(xs)

    def to_json(self):
        return {"kind": "constant", "c": self.c, "domain": self.domain.to_json()}


@dataclass(frozen=True)
class Affine(FunctionExpr):
    a: float
    b: float
    domain: Interval = REAL_LINE
    kind = "affine"

    def __post_init__(self):
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))

    def _val(self, xs):
        return self.a * xs + self.b

    def _cval(self, zs):
        return self.a * zs + self.b

    def _dval(self, xs):
        return np.full_like(xs, self.a)

    def to_json(self):
        return {"kind": "affine", "a": self.a, "b": self.b,
                "domain": self.domain.to_json()}


def identity(domain: Interval = REAL_LINE) -> Affine:
    return Affine(1.0, 0.0, domain)


@dataclass(frozen=True)
class Power(FunctionExpr):
    """x^alpha.  Natural domain: all reals for integer alpha >= 0, (0, inf)
    for negative alpha, [0, inf) for non-integer positive alpha."""

    alpha: float
    domain: Interval = None
    kind = "power"

    def __post_init__(self):
        alpha = float(self.alpha)
        object.__setattr__(self, "alpha", alpha)
        if alpha >= 0 and alpha.is_integer():
            natural = REAL_LINE
        elif alpha < 0:
            natural = Interval(0.0, math.inf)
        else:
            natural = Interval(0.0, math.inf, lo_closed=True)
        if self.domain is None:
            object.__setattr__(self, "domain", natural)
        elif not (alpha < 0 and alpha.is_integer() and self.domain.hi <= 0):
            # negative-integer powers are also fine on intervals left of 0
            if not natural.contains_interval(self.domain):
                raise DomainError(
                    f"domain {self.domain} not within natural domain {natural}")

    @property
    def _integer(self) -> bool:
        return self.alpha.is_integer()

    def _val(self, xs):
        if not self._integer and np.any(xs < 0):
            bad = xs[xs < 0].ravel()[0]
            raise BranchError(f"negative base {bad!r} for exponent {self.alpha}")
        if self.alpha < 0 and np.any(xs == 0):
            raise DomainError(f"zero base for exponent {self.alpha}")
        return np.power(xs, self.alpha)

    def _cval(self, zs):
        if self._integer:
            return np.power(zs, int(self.alpha))
        return np.exp(self.alpha * np.log(zs))  # principal branch

    def _dval(self, xs):
        if self.alpha == 0:
            return np.zeros_like(xs)
        if not self._integer and np.any(xs < 0):
            bad = xs[xs < 0].ravel()[0]
            raise BranchError(f"negative base {bad!r} for exponent {self.alpha}")
        return self.alpha * np.power(xs, self.alpha - 1.0)

    def to_json(self):
        return {"kind": "power", "alpha": self.alpha,
                "domain": self.domain.to_json()}


@dataclass(frozen=True)
class Reciprocal(FunctionExpr):
    """1/x on an interval not containing 0 (default (0, inf))."""

    domain: Interval = Interval(0.0, math.inf)
    kind = "reciprocal"

    def __post_init__(self):
        if self.domain.contains(0.0):
            raise DomainError(f"domain {self.domain} contains the pole at 0")

    def _val(self, xs):
        if np.any(xs == 0):
            raise DomainError("reciprocal evaluated at 0")
        return 1.0 / xs

    def _cval(self, zs):
        return 1.0 / zs

    def _dval(self, xs):
        return -1.0 / xs**2

    def to_json(self):
        return {"kind": "reciprocal", "domain": self.domain.to_json()}


class _CatalogEntry:
    def __init__(self, domain_fn, val, cval=None, dval=None, validate=None):
        self.domain_fn = domain_fn
        self.val = val
        self.cval = cval
        self.dval = dval
        self.validate = validate


def _pdm_validate(p):
    if not 0.0 < p["alpha"] <= 1.0:
        raise ValueError(f"alpha={p['alpha']} outside (0, 1]")


CATALOG = {
    # x^alpha - (2-x)^alpha on [0, 2]; odd around x=1, increasing for alpha in (0,1]
    "power_diff_mirror": _CatalogEntry(
        domain_fn=lambda p: Interval(0.0, 2.0, lo_closed=True, hi_closed=True),
        val=lambda p, x: np.power(x, p["alpha"]) - np.power(2.0 - x, p["alpha"]),
        cval=lambda p, z: (np.exp(p["alpha"] * np.log(z))
                           - np.exp(p["alpha"] * np.log(2.0 - z))),
        dval=lambda p, x: p["alpha"] * (np.power(x, p["alpha"] - 1.0)
                                        + np.power(2.0 - x, p["alpha"] - 1.0)),
        validate=_pdm_validate,
    ),
    "log": _CatalogEntry(
        domain_fn=lambda p: Interval(0.0, math.inf),
        val=lambda p, x: np.log(x),
        cval=lambda p, z: np.log(z),
        dval=lambda p, x: 1.0 / x,
    ),
}


@dataclass(frozen=True)
class Catalog(FunctionExpr):
    """Named function from the built-in catalog, with numeric parameters."""

    name: str
    params: tuple = ()
    domain: Interval = None
    kind = "catalog"

    def __post_init__(self):
        if self.name not in CATALOG:
            raise UnsupportedNode(f"unknown catalog function {self.name!r}")
        params = self.params
        if isinstance(params, dict):
            params = tuple(sorted((k, float(v)) for k, v in params.items()))
        else:
            params = tuple(sorted((k, float(v)) for k, v in params))
        object.__setattr__(self, "params", params)
        entry = CATALOG[self.name]
        if entry.validate is not None:
            entry.validate(dict(params))
        natural = entry.domain_fn(dict(params))
        if self.domain is None:
            object.__setattr__(self, "domain", natural)
        elif not natural.contains_interval(self.domain):
            raise DomainError(
                f"domain {self.domain} not within natural domain {natural}")

    @property
    def _p(self) -> dict:
        return dict(self.params)

    def _val(self, xs):
        entry = CATALOG[self.name]
        nat = entry.domain_fn(self._p)
        if np.any(xs < nat.lo) or np.any(xs > nat.hi):
            raise BranchError(f"{self.name} evaluated outside {nat}")
        return entry.val(self._p, xs)

    def _cval(self, zs):
        entry = CATALOG[self.name]
        if entry.cval is None:
            raise UnsupportedNode(f"{self.name} has no holomorphic extension")
        return entry.cval(self._p, zs)

    def _dval(self, xs):
        entry = CATALOG[self.name]
        if entry.dval is None:
            return self._numeric_dval(xs)
        return entry.dval(self._p, xs)

    def to_json(self):
        return {"kind": "catalog", "name": self.name,
                "params": dict(self.params), "domain": self.domain.to_json()}


def _trim(coeffs) -> tuple:
    out = [float(c) for c in coeffs]
    while len(out) > 1 and out[-1] == 0.0:
        out.pop()
    return tuple(out)


@dataclass(frozen=True)
class Quotient(FunctionExpr):
    """Ratio of polynomials, coefficients ascending.  The denominator is
    scanned on a 1001-point grid at construction; an exact zero or a sign
    change (a pole inside the domain) is rejected."""

    num: tuple
    den: tuple = (1.0,)
    domain: Interval = REAL_LINE
    kind = "quotient"

    def __post_init__(self):
        num, den = _trim(self.num), _trim(self.den)
        if den == (0.0,):
            raise ZeroDivisionError("zero denominator polynomial")
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        if len(den) > 1:
            from .scanning import scan_grid

            dv = np.polynomial.polynomial.polyval(scan_grid(self.domain), den)
            with np.errstate(over="ignore"):
                flips = np.any(dv[:-1] * dv[1:] < 0.0)
            if np.any(dv == 0.0) or flips:
                raise DomainError(
                    f"denominator vanishes inside {self.domain}")

    def _val(self, xs):
        pv = np.polynomial.polynomial.polyval
        dv = pv(xs, self.den)
        if np.any(dv == 0.0):
            raise DomainError("denominator vanishes at an evaluation point")
        return pv(xs, self.num) / dv

    def _cval(self, zs):
        pv = np.polynomial.polynomial.polyval
        return pv(zs, self.num) / pv(zs, self.den)

    def _dval(self, xs):
        pv = np.polynomial.polynomial.polyval
        n, d = self.num, self.den
        dn = tuple(i * n[i] for i in range(1, len(n))) or (0.0,)
        dd = tuple(i * d[i] for i in range(1, len(d))) or (0.0,)
        dv = pv(xs, d)
        return (pv(xs, dn) * dv - pv(xs, n) * pv(xs, dd)) / dv**2

    def to_json(self):
        return {"kind": "quotient", "num": list(self.num), "den": list(self.den),
                "domain": self.domain.to_json()}


# --- measure-form leaves ---------------------------------------------------------

@dataclass(frozen=True)
class MeasureOM(FunctionExpr):
    rep: OMRep
    kind = "measure_om"

    @property
    def domain(self) -> Interval:
        return self.rep.interval

    def _val(self, xs):
        return np.asarray(eval_om(self.rep, xs))

    def _cval(self, zs):
        return np.asarray(eval_om_complex(self.rep, zs))

    def _dval(self, xs):
        return np.asarray(deriv_om(self.rep, xs))

    def to_json(self):
        return {"kind": "measure_om", **rep_to_json(self.rep)}


@dataclass(frozen=True)
class MeasureOC(FunctionExpr):
    rep: OCRep
    kind = "measure_oc"

    @property
    def domain(self) -> Interval:
        return self.rep.interval

    def _val(self, xs):
        return np.asarray(eval_oc(self.rep, xs))

    def _cval(self, zs):
        return np.asarray(eval_oc_complex(self.rep, zs))

    def _dval(self, xs):
        return np.asarray(deriv_oc(self.rep, xs))

    def to_json(self):
        return {"kind": "measure_oc", **rep_to_json(self.rep)}


@dataclass(frozen=True)
class MeasureSOC(FunctionExpr):
    rep: SOCRep
    kind = "measure_soc"

    @property
    def domain(self) -> Interval:
        return self.rep.interval

    def _val(self, xs):
        return np.asarray(eval_soc(self.rep, xs))

    def _cval(self, zs):
        return np.asarray(eval_soc_complex(self.rep, zs))

    def _dval(self, xs):
        return np.asarray(deriv_soc(self.rep, xs))

    def to_json(self):
        return {"kind": "measure_soc", **rep_to_json(self.rep)}


# --- transforms -------------------------------------------------------------------

@dataclass(frozen=True)
class DiffQuot(FunctionExpr):
    """(f(x) - f(x0)) / (x - x0).

    The center may be any point of the closure of the child's domain at which
    the child has a finite value or limit.  If x0 is an endpoint the result's
    domain excludes it; an interior x0 stays in the domain and the value there
    is the child's derivative (the removable singularity is filled in).
    """

    child: FunctionExpr
    x0: float
    center_value: float = field(init=False, compare=False, repr=False, default=0.0)
    kind = "diffquot"

    def __post_init__(self):
        x0 = float(self.x0)
        object.__setattr__(self, "x0", x0)
        if not math.isfinite(x0):
            raise OutsideClosure(f"center {x0} is not finite")
        cdom = self.child.domain
        if cdom.contains(x0):
            center = self.child.eval_real(x0)
        elif cdom.closure_contains(x0):
            center = endpoint_limit(self.child.eval_real, cdom, x0)
        else:
            raise OutsideClosure(f"center {x0} outside the closure of {cdom}")
        object.__setattr__(self, "center_value", float(center))

    @property
    def domain(self) -> Interval:
        cdom = self.child.domain
        if cdom.is_endpoint(self.x0):
            return cdom.without_endpoint(self.x0)
        return cdom

    @cached_property
    def _center_deriv(self) -> float:
        return self.child.eval_deriv(self.x0)

    def _val(self, xs):
        diff = xs - self.x0
        at_center = diff == 0.0
        out = np.empty_like(xs)
        if np.any(~at_center):
            cv = self.child._val(xs[~at_center])
            out[~at_center] = (cv - self.center_value) / diff[~at_center]
        if np.any(at_center):
            out[at_center] = self._center_deriv
        return out

    def _cval(self, zs):
        return (self.child._cval(zs) - self.center_value) / (zs - self.x0)

    def _dval(self, xs):
        diff = xs - self.x0
        near = np.abs(diff) <= 1e-8 * (1.0 + abs(self.x0))
        out = np.empty_like(xs)
        if np.any(~near):
            x = xs[~near]
            d = diff[~near]
            out[~near] = (self.child._dval(x) * d
                          - (self.child._val(x) - self.center_value)) / d**2
        if np.any(near):
            out[near] = self._numeric_dval(xs[near])
        return out

    def to_json(self):
        return {"kind": "diffquot", "x0": self.x0, "child": self.child.to_json()}


@dataclass(frozen=True)
class NegRecip(FunctionExpr):
    """-1/f.  Construction scans f on a 1001-point grid (with endpoint
    limits) for the sign expected by ``positive_child`` and records the
    outcome in ``scan_ok``; a failed scan flags the node, it does not raise."""

    child: FunctionExpr
    positive_child: bool = True
    scan_ok: bool = field(init=False, compare=False, default=True)
    scan_note: str = field(init=False, compare=False, repr=False, default="")
    kind = "negrecip"

    def __post_init__(self):
        check = check_positive if self.positive_child else check_negative
        try:
            check(self.child.eval_real, self.child.domain)
            ok, note = True, ""
        except (NotPositive, NotNegative, ZeroFunction) as err:
            ok, note = False, str(err)
        object.__setattr__(self, "scan_ok", ok)
        object.__setattr__(self, "scan_note", note)

    @property
    def domain(self) -> Interval:
        return self.child.domain

    def _val(self, xs):
        cv = self.child._val(xs)
        if np.any(cv == 0.0):
            raise DomainError("child of -1/f vanishes at an evaluation point")
        return -1.0 / cv

    def _cval(self, zs):
        return -1.0 / self.child._cval(zs)

    def _dval(self, xs):
        cv = self.child._val(xs)
        return self.child._dval(xs) / cv**2

    def to_json(self):
        return {"kind": "negrecip", "positive_child": self.positive_child,
                "child": self.child.to_json()}


@dataclass(frozen=True)
class MulLinear(FunctionExpr):
    """f(x) * (x - x0) + c."""

    child: FunctionExpr
    x0: float
    c: float = 0.0
    kind = "mullinear"

    def __post_init__(self):
        object.__setattr__(self, "x0", float(self.x0))
        object.__setattr__(self, "c", float(self.c))
        if not math.isfinite(self.x0):
            raise OutsideClosure(f"anchor {self.x0} is not finite")
        if not self.child.domain.closure_contains(self.x0):
            raise OutsideClosure(
                f"anchor {self.x0} outside the closure of {self.child.domain}")

    @property
    def domain(self) -> Interval:
        return self.child.domain

    def _val(self, xs):
        return self.child._val(xs) * (xs - self.x0) + self.c

    def _cval(self, zs):
        return self.child._cval(zs) * (zs - self.x0) + self.c

    def _dval(self, xs):
        return self.child._dval(xs) * (xs - self.x0) + self.child._val(xs)

    def to_json(self):
        return {"kind": "mullinear", "x0": self.x0, "c": self.c,
                "child": self.child.to_json()}


@dataclass(frozen=True)
class Compose(FunctionExpr):
    """outer(inner(x)) on inner's domain.  Whether inner's range lies inside
    outer's domain is a semantic condition checked by the transform layer,
    not here; raw evaluation applies outer's formula to whatever comes out."""

    outer: FunctionExpr
    inner: FunctionExpr
    kind = "compose"

    @property
    def domain(self) -> Interval:
        return self.inner.domain

    def _val(self, xs):
        return self.outer._val(np.asarray(self.inner._val(xs), dtype=float))

    def _cval(self, zs):
        return self.outer._cval(np.asarray(self.inner._cval(zs), dtype=complex))

    def _dval(self, xs):
        inner_v = np.asarray(self.inner._val(xs), dtype=float)
        return self.outer._dval(inner_v) * self.inner._dval(xs)

    def to_json(self):
        return {"kind": "compose", "outer": self.outer.to_json(),
                "inner": self.inner.to_json()}


# --- JSON ------------------------------------------------------------------------

def to_json(fn: FunctionExpr) -> dict:
    return fn.to_json()


def _dom(d: dict, default=None):
    if "domain" in d:
        return Interval.from_json(d["domain"])
    return default


def from_json(d: dict) -> FunctionExpr:
    """Rebuild an expression tree from its JSON dict."""
    if not isinstance(d, dict) or "kind" not in d:
        raise ValueError("function JSON must be an object with a 'kind' key")
    kind = d["kind"]
    if kind == "constant":
        return Constant(d["c"], _dom(d, REAL_LINE))
    if kind == "affine":
        return Affine(d["a"], d["b"], _dom(d, REAL_LINE))
    if kind == "power":
        return Power(d["alpha"], _dom(d))
    if kind == "reciprocal":
        return Reciprocal(_dom(d, Interval(0.0, math.inf)))
    if kind == "catalog":
        return Catalog(d["name"], tuple(d.get("params", {}).items()), _dom(d))
    if kind == "quotient":
        return Quotient(tuple(d["num"]), tuple(d["den"]), _dom(d, REAL_LINE))
    if kind == "diffquot":
        return DiffQuot(from_json(d["child"]), d["x0"])
    if kind == "negrecip":
        return NegRecip(from_json(d["child"]), d.get("positive_child", True))
    if kind == "mullinear":
        return MulLinear(from_json(d["child"]), d["x0"], d.get("c", 0.0))
    if kind == "compose":
        return Compose(from_json(d["outer"]), from_json(d["inner"]))
    if kind == "measure_om":
        return MeasureOM(rep_from_json(d, "om"))
    if kind == "measure_oc":
        return MeasureOC(rep_from_json(d, "oc"))
    if kind == "measure_soc":
        return MeasureSOC(rep_from_json(d, "soc"))
    raise UnsupportedNode(f"unknown function kind {kind!r}")
