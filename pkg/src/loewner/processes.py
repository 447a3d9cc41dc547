"""Multi-stage construction pipelines over the three function classes.

Three processes, all driven by a seed function and a list of anchor points
(consumed cyclically when a process outlives the list):

* main_cycle:       OM --diffquot--> SOC --(-1/f)--> OC --diffquot--> OM ...
* star_process:     repeated difference quotients, classes alternating
                    OM, SOC, OM, SOC, ...
* backward_process: OM --(*(x-x0)+c, c<0)--> OC --(-1/f)--> SOC
                    --(*(x-x1)+c)--> OM ...  (runs the cycle in reverse)

A main cycle stops early when a difference-quotient stage in SOC position
is identically zero ("terminated_zero") or when an OM stage collapses to a
nonzero rational of degree 0 ("terminated_rational" — the degree of a
rational seed drops by one per full cycle, so this is the generic end).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .classify import CertifyConfig, check_convex, check_monotone, check_strong
from .errors import NotRational, StageCertificationFailed
from .funexpr import FunctionExpr, from_json, to_json
from .ratpoly import as_rational
from .scanning import is_zero_on_grid
from .transforms import choose_shift, diff_quotient, mul_linear, neg_reciprocal

__all__ = [
    "PipelineStage", "PipelineRun",
    "main_cycle", "star_process", "backward_process", "rational_degree_of",
]


@dataclass(frozen=True)
class PipelineStage:
    index: int
    label: str                  # "OM" | "SOC" | "OC"
    expr: FunctionExpr
    point: float = None         # anchor consumed to build this stage
    shift: float = None         # additive constant, for mul-linear stages
    certificate: object = None

    def to_json(self) -> dict:
        out = {"index": self.index, "label": self.label,
               "function": to_json(self.expr)}
        if self.point is not None:
            out["point"] = self.point
        if self.shift is not None:
            out["shift"] = self.shift
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        return out


@dataclass(frozen=True)
class PipelineRun:
    kind: str                   # "main" | "star" | "backward"
    stages: tuple
    points: tuple
    status: str                 # "completed" | "terminated_zero" | "terminated_rational"
    inconsistencies: tuple = ()

    @property
    def final(self) -> FunctionExpr:
        return self.stages[-1].expr

    def stage(self, index: int) -> PipelineStage:
        for s in self.stages:
            if s.index == index:
                return s
        raise KeyError(f"no stage with index {index}")

    def to_json(self) -> dict:
        return {"kind": self.kind, "status": self.status,
                "points": list(self.points),
                "stages": [s.to_json() for s in self.stages],
                "inconsistencies": list(self.inconsistencies)}

    @staticmethod
    def from_json(d: dict) -> "PipelineRun":
        from .classify import Certificate

        stages = []
        for s in d["stages"]:
            cert = (Certificate.from_json(s["certificate"])
                    if "certificate" in s else None)
            stages.append(PipelineStage(index=s["index"], label=s["label"],
                                        expr=from_json(s["function"]),
                                        point=s.get("point"),
                                        shift=s.get("shift"),
                                        certificate=cert))
        return PipelineRun(kind=d["kind"], stages=tuple(stages),
                           points=tuple(d["points"]), status=d["status"],
                           inconsistencies=tuple(d.get("inconsistencies", ())))


_CHECKS = {"OM": check_monotone, "OC": check_convex, "SOC": check_strong}


def _certify(stage: PipelineStage, certify: bool,
             config: CertifyConfig) -> PipelineStage:
    if not certify:
        return stage
    cert = _CHECKS[stage.label](stage.expr, config)
    if cert.verdict == "fail":
        raise StageCertificationFailed(stage.index, cert)
    return PipelineStage(index=stage.index, label=stage.label, expr=stage.expr,
                         point=stage.point, shift=stage.shift, certificate=cert)


def _is_zero_stage(fn: FunctionExpr) -> bool:
    try:
        return as_rational(fn).is_zero
    except NotRational:
        return is_zero_on_grid(fn.eval_real, fn.domain)


def rational_degree_of(fn: FunctionExpr):
    """Degree of the exact rational form, or None when not rational."""
    try:
        return as_rational(fn).degree
    except NotRational:
        return None


def main_cycle(f0: FunctionExpr, points, cycles: int = None,
               certify: bool = False,
               config: CertifyConfig = CertifyConfig()) -> PipelineRun:
    """Run the three-step cycle starting from an operator monotone seed.

    Each cycle consumes two anchors (cyclically).  Stages are indexed
    f_0, f_1, f_2, ... with labels OM, SOC, OC, OM, SOC, OC, ...
    """
    points = tuple(float(p) for p in points)
    if not points:
        raise ValueError("need at least one anchor point")
    if cycles is None:
        cycles = max(1, math.ceil(len(points) / 2))

    consumed = 0

    def next_point() -> float:
        nonlocal consumed
        p = points[consumed % len(points)]
        consumed += 1
        return p

    stages = [_certify(PipelineStage(0, "OM", f0), certify, config)]
    status = "completed"
    idx = 0
    for _ in range(cycles):
        p = next_point()
        idx += 1
        soc = PipelineStage(idx, "SOC", diff_quotient(stages[-1].expr, p), point=p)
        if _is_zero_stage(soc.expr):
            stages.append(_certify(soc, certify, config))
            status = "terminated_zero"
            break
        stages.append(_certify(soc, certify, config))

        idx += 1
        oc = PipelineStage(idx, "OC", neg_reciprocal(soc.expr, positive=True))
        stages.append(_certify(oc, certify, config))

        p = next_point()
        idx += 1
        om = PipelineStage(idx, "OM", diff_quotient(oc.expr, p), point=p)
        stages.append(_certify(om, certify, config))

        try:
            rat = as_rational(om.expr)
        except NotRational:
            rat = None
        if rat is not None:
            if rat.is_zero:
                # the next difference quotient is identically zero whatever
                # the anchor; surface the zero in SOC position and stop
                p = next_point()
                idx += 1
                zero = PipelineStage(idx, "SOC",
                                     diff_quotient(om.expr, p), point=p)
                stages.append(_certify(zero, certify, config))
                status = "terminated_zero"
                break
            if rat.degree == 0:
                status = "terminated_rational"
                break
    return PipelineRun("main", tuple(stages), points, status)


def star_process(f0: FunctionExpr, points, steps: int = None,
                 certify: bool = False,
                 config: CertifyConfig = CertifyConfig()) -> PipelineRun:
    """Repeated difference quotients; the class alternates OM, SOC, OM, ...

    Runs through identically-zero stages without terminating (a zero is a
    fixed point of the difference quotient, not an error here).
    """
    points = tuple(float(p) for p in points)
    if not points:
        raise ValueError("need at least one anchor point")
    if steps is None:
        steps = len(points)

    stages = [_certify(PipelineStage(0, "OM", f0), certify, config)]
    for k in range(steps):
        p = points[k % len(points)]
        label = "SOC" if k % 2 == 0 else "OM"
        nxt = PipelineStage(k + 1, label,
                            diff_quotient(stages[-1].expr, p), point=p)
        stages.append(_certify(nxt, certify, config))
    return PipelineRun("star", tuple(stages), points, "completed")


def backward_process(f0: FunctionExpr, points, shifts=None,
                     cycles: int = None, certify: bool = False,
                     config: CertifyConfig = CertifyConfig()) -> PipelineRun:
    """Run the cycle in reverse from an operator monotone seed.

    Stage -1 is f0(x)(x - x0) + c with c forced negative (given, or picked
    by choose_shift); stage -2 is -1/(stage -1); stage -3 multiplies by the
    next linear factor (shift defaults to 0).  Stages are indexed 0, -1,
    -2, ... with labels OM, OC, SOC, OM, ...
    """
    points = tuple(float(p) for p in points)
    if not points:
        raise ValueError("need at least one anchor point")
    if cycles is None:
        cycles = max(1, math.ceil(len(points) / 2))
    shifts = list(shifts) if shifts is not None else []

    consumed = 0

    def next_point() -> float:
        nonlocal consumed
        p = points[consumed % len(points)]
        consumed += 1
        return p

    def next_shift(fn, x0, default_auto: bool):
        k = (consumed - 1)  # shift slot aligned with the point just taken
        if k < len(shifts) and shifts[k] is not None:
            return float(shifts[k])
        if default_auto:
            return choose_shift(fn, x0)
        return 0.0

    stages = [_certify(PipelineStage(0, "OM", f0), certify, config)]
    idx = 0
    for _ in range(cycles):
        p = next_point()
        c = next_shift(stages[-1].expr, p, default_auto=True)
        idx -= 1
        oc = PipelineStage(idx, "OC", mul_linear(stages[-1].expr, p, c),
                           point=p, shift=c)
        stages.append(_certify(oc, certify, config))

        idx -= 1
        soc = PipelineStage(idx, "SOC", neg_reciprocal(oc.expr, positive=False))
        stages.append(_certify(soc, certify, config))

        p = next_point()
        c = next_shift(stages[-1].expr, p, default_auto=False)
        idx -= 1
        om = PipelineStage(idx, "OM", mul_linear(soc.expr, p, c),
                           point=p, shift=c)
        stages.append(_certify(om, certify, config))
    return PipelineRun("backward", tuple(stages), points, "completed")
