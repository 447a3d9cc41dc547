"""Command-line front end.

Four subcommands, all spec-file driven and deterministic:

* ``classify``   run every membership check on a function
* ``pipeline``   run one of the construction processes
* ``measure``    evaluate or transform a discrete-measure representation
* ``report``     summarize a classify output, optionally replaying witnesses

Each writes JSON (sorted keys) plus a CSV of sampled values into --out.
Outputs are pure functions of the spec and flags: a rerun produces
byte-identical files.  Exit codes: 0 for any valid run (a "fail" verdict is
a valid answer), 2 for unreadable/unparsable input (JSON errors report the
byte offset), 3 for evaluation or validation errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import classify as _classify
from . import funexpr, measures, processes
from .errors import LoewnerError

__all__ = ["main"]

GRID_POINTS = 201
PARSE_ERROR, EVAL_ERROR = 2, 3


class _CliFailure(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


# --- I/O helpers -----------------------------------------------------------------

def _load_spec(path: str) -> dict:
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as err:
        raise _CliFailure(PARSE_ERROR, f"cannot read spec: {err}") from err
    try:
        return json.loads(raw)
    except json.JSONDecodeError as err:
        raise _CliFailure(
            PARSE_ERROR,
            f"spec is not valid JSON at byte offset {err.pos}: {err.msg}") from err


def _atomic_write(path: str, data: str):
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(data)
    os.replace(tmp, path)


def _write_json(out_dir: str, name: str, obj: dict):
    _atomic_write(os.path.join(out_dir, name),
                  json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _write_csv(out_dir: str, name: str, header, rows):
    lines = [",".join(header)]
    lines += [",".join(r) for r in rows]
    _atomic_write(os.path.join(out_dir, name), "\n".join(lines) + "\n")


def _sample_grid(domain) -> np.ndarray:
    win = domain.clip(20.0)
    width = win.hi - win.lo
    return np.linspace(win.lo + 0.01 * width, win.hi - 0.01 * width, GRID_POINTS)


# --- spec parsing ------------------------------------------------------------------

def _function_from(spec: dict, key: str = "function"):
    if key not in spec:
        raise _CliFailure(EVAL_ERROR, f"spec is missing the {key!r} entry")
    try:
        return funexpr.from_json(spec[key])
    except LoewnerError as err:
        raise _CliFailure(EVAL_ERROR, f"bad function: {err}") from err
    except (KeyError, TypeError, ValueError) as err:
        raise _CliFailure(EVAL_ERROR, f"bad function JSON: {err}") from err


def _parse_dims(text: str) -> tuple:
    text = text.strip()
    if ".." in text:
        lo, hi = text.split("..", 1)
        dims = tuple(range(int(lo), int(hi) + 1))
    else:
        dims = tuple(int(t) for t in text.split(","))
    if not dims or any(d < 1 for d in dims):
        raise ValueError(f"bad dims {text!r}")
    return dims


def _config_from(spec: dict, args) -> _classify.CertifyConfig:
    cfg = dict(spec.get("config", {}))
    seed = 0
    if "seed" in cfg:
        seed = int(cfg["seed"])
    env = os.environ.get("LOEWNER_SEED")
    if env is not None:
        try:
            seed = int(env)
        except ValueError as err:
            raise _CliFailure(PARSE_ERROR,
                              f"LOEWNER_SEED is not an integer: {env!r}") from err
    if args.seed is not None:
        seed = args.seed
    kwargs = {"seed": seed}
    if "trials" in cfg:
        kwargs["trials"] = int(cfg["trials"])
    if args.trials is not None:
        kwargs["trials"] = args.trials
    if "dims" in cfg:
        kwargs["dims"] = tuple(int(d) for d in cfg["dims"])
    if args.dims is not None:
        try:
            kwargs["dims"] = _parse_dims(args.dims)
        except ValueError as err:
            raise _CliFailure(PARSE_ERROR, str(err)) from err
    if "tol" in cfg:
        kwargs["tol"] = float(cfg["tol"])
    return _classify.CertifyConfig(**kwargs)


# --- subcommands ----------------------------------------------------------------------

def _cmd_classify(args) -> int:
    spec = _load_spec(args.spec)
    fn = _function_from(spec)
    config = _config_from(spec, args)
    result = _classify.classify_all(fn, config)
    _write_json(args.out, "certificates.json", {
        "config": {"trials": config.trials, "dims": list(config.dims),
                   "tol": config.tol, "seed": config.seed},
        "function": funexpr.to_json(fn),
        "result": result.to_json(),
    })
    xs = _sample_grid(fn.domain)
    vals = np.asarray(fn.eval_real(xs), dtype=float)
    _write_csv(args.out, "values.csv", ("x", "value"),
               [(_fmt(x), _fmt(v)) for x, v in zip(xs, vals)])
    return 0


def _cmd_pipeline(args) -> int:
    spec = _load_spec(args.spec)
    fn = _function_from(spec)
    config = _config_from(spec, args)
    process = spec.get("process", "main")
    points = spec.get("points")
    if not points:
        raise _CliFailure(EVAL_ERROR, "spec is missing 'points'")
    certify = bool(spec.get("certify", False)) or args.certify
    if process == "main":
        run = processes.main_cycle(fn, points, cycles=spec.get("cycles"),
                                   certify=certify, config=config)
    elif process == "star":
        run = processes.star_process(fn, points, steps=spec.get("steps"),
                                     certify=certify, config=config)
    elif process == "backward":
        run = processes.backward_process(fn, points, shifts=spec.get("shifts"),
                                         cycles=spec.get("cycles"),
                                         certify=certify, config=config)
    else:
        raise _CliFailure(EVAL_ERROR, f"unknown process {process!r}")
    _write_json(args.out, "pipeline.json", {
        "config": {"seed": config.seed, "trials": config.trials},
        "run": run.to_json(),
    })
    rows = []
    for stage in run.stages:
        xs = _sample_grid(stage.expr.domain)
        vals = np.asarray(stage.expr.eval_real(xs), dtype=float)
        rows += [(_fmt(x), _fmt(v), str(stage.index))
                 for x, v in zip(xs, vals)]
    _write_csv(args.out, "stages.csv", ("x", "value", "stage"), rows)
    return 0


def _cmd_measure(args) -> int:
    spec = _load_spec(args.spec)
    kind = spec.get("kind")
    if kind not in ("om", "oc", "soc"):
        raise _CliFailure(EVAL_ERROR, f"measure kind must be om/oc/soc, got {kind!r}")
    try:
        rep = measures.rep_from_json(spec["measure"], kind)
    except (KeyError, TypeError, ValueError) as err:
        raise _CliFailure(EVAL_ERROR, f"bad measure: {err}") from err

    transform = spec.get("transform")
    out = {"kind_in": kind, "input": measures.rep_to_json(rep)}
    out_rep, out_kind = rep, kind
    if transform:
        op = transform.get("op")
        if op == "om_to_soc":
            out_rep = measures.om_to_soc(rep, float(transform["x0"]))
            out_kind = "soc"
        elif op == "extend":
            ext, delta = measures.extend_at_endpoint(rep, float(transform["b"]))
            xs = _sample_grid(rep.interval)
            out["extension"] = {
                "b": ext.b, "delta": delta, "value_at_b": ext.value_at_b,
                "identity_residual_max": ext.identity_residual(xs),
            }
            out_rep, out_kind = ext.quotient_rep, "soc"
        elif op == "substitute_square":
            out_rep = measures.substitute_square(rep)
            out_kind = "oc"
        elif op == "recover":
            node = {"om": funexpr.MeasureOM, "oc": funexpr.MeasureOC,
                    "soc": funexpr.MeasureSOC}[kind](rep)
            w = measures.recover_atom_weight(
                node, float(transform["r"]), tuple(transform["window"]),
                eps_list=tuple(transform.get("eps", (1e-2, 1e-3, 1e-4))),
                side=transform.get("side", "+"))
            out["recovered"] = {"r": float(transform["r"]), "weight": w}
        else:
            raise _CliFailure(EVAL_ERROR, f"unknown measure op {op!r}")
    out["kind_out"] = out_kind
    out["output"] = measures.rep_to_json(out_rep)
    out["transform"] = transform
    _write_json(args.out, "measure.json", out)

    xs = _sample_grid(out_rep.interval)
    vals = np.asarray(out_rep(xs), dtype=float)
    _write_csv(args.out, "values.csv", ("x", "value"),
               [(_fmt(x), _fmt(v)) for x, v in zip(xs, vals)])
    return 0


def _cmd_report(args) -> int:
    spec = _load_spec(args.spec)
    fn = _function_from(spec)
    result = spec.get("result")
    if not result or "certificates" not in result:
        raise _CliFailure(EVAL_ERROR, "spec carries no 'result.certificates' "
                                      "(point --spec at a classify output)")
    report = {"verdicts": {}, "flags": result.get("flags", [])}
    for name, cert_json in sorted(result["certificates"].items()):
        cert = _classify.Certificate.from_json(cert_json)
        entry = {"property": cert.property, "verdict": cert.verdict,
                 "trials": cert.trials}
        if args.replay and cert.witness is not None:
            replayed = _classify.replay_witness(fn, cert)
            stored = cert.witness.get("min_eig")
            entry["replay"] = {
                "stored": stored, "replayed": replayed,
                "match": bool(abs(replayed - stored) <= 1e-8 * (1 + abs(stored))),
            }
        report["verdicts"][name] = entry
    _write_json(args.out, "report.json", report)
    return 0


# --- entry point -----------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="loewner",
        description="Construct and certify matrix-monotone/convex functions.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn, extra in (
            ("classify", _cmd_classify, ()),
            ("pipeline", _cmd_pipeline, ("certify",)),
            ("measure", _cmd_measure, ()),
            ("report", _cmd_report, ("replay",))):
        p = sub.add_parser(name)
        p.add_argument("--spec", required=True, help="input spec JSON")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--trials", type=int, default=None)
        p.add_argument("--dims", default=None,
                       help="matrix sizes, e.g. '2..8' or '2,4,6'")
        for flag in extra:
            p.add_argument(f"--{flag}", action="store_true")
        p.set_defaults(handler=fn)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        os.makedirs(args.out, exist_ok=True)
        return args.handler(args)
    except _CliFailure as err:
        print(f"loewner: {err}", file=sys.stderr)
        return err.code
    except LoewnerError as err:
        print(f"loewner: {type(err).__name__}: {err}", file=sys.stderr)
        return EVAL_ERROR


if __name__ == "__main__":
    sys.exit(main())
