"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 validation error,
3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .errors import FrHankelError, NoConvergence, TruncationFailure, ValidationError
from .frht import LazyTransform, oracle_forward, oracle_inverse, parseval_defects
from .model import (
    ComplexSignal,
    GaussChirp,
    GaussChirpSum,
    RadialGrid,
    TransformParams,
    grid_from_spec,
    make_params,
)
from .quadrature import QuadratureSpec
from .suites import SUITES, run_suite
from .type_s import check_sequence, seminorm_table, sequence_family
from .wavelet import cwt_direct_batch, cwt_spectral

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3

TOL_ENV = "FRH_DEFAULT_TOL"
FLOAT_FMT = "%.17g"


# -- parsing helpers ----------------------------------------------------------

_ANGLE = re.compile(r"^\s*([+-]?\d*\.?\d*)\s*\*?\s*pi\s*(?:/\s*(\d+(?:\.\d*)?))?\s*$")


def parse_angle(text: str) -> float:
    """Radians, or ``[k*]pi[/n]`` such as ``pi/3`` or ``2pi/3``."""
    m = _ANGLE.match(text.lower())
    if m:
        k = m.group(1)
        k = float(k) if k not in ("", "+", "-") else (-1.0 if k == "-" else 1.0)
        n = float(m.group(2)) if m.group(2) else 1.0
        return k * math.pi / n
    try:
        return float(text)
    except ValueError:
        raise ValidationError(f"cannot parse angle {text!r}") from None


FUNCTION_KEYS = ("s", "p", "c", "amp")


def parse_function(text: str, params: TransformParams) -> GaussChirpSum:
    """Builtin Gauss-chirp inputs, ``name[:key=val,...]`` joined by ``+``.

    * ``gauss``  : ``amp * t^s exp(-p t^2) exp(i c t^2/2)``, defaults s=0, p=0.5, c=0
    * ``oracle`` : same with defaults s=nu-mu, c=-cot(theta) (closed-form transform)
    * ``zero``   : the zero function
    """
    out = GaussChirpSum.zero()
    for piece in text.split("+"):
        name, _, rest = piece.strip().partition(":")
        if name == "zero":
            continue
        if name == "gauss":
            vals = {"s": 0.0, "p": 0.5, "c": 0.0, "amp": 1.0}
        elif name == "oracle":
            cot = 0.0 if params.is_identity else params.cot
            vals = {"s": params.nu - params.mu, "p": 0.5, "c": -cot, "amp": 1.0}
        else:
            raise ValidationError(f"unknown function {name!r} (gauss, oracle, zero)")
        for item in filter(None, (x.strip() for x in rest.split(","))):
            key, eq, val = item.partition("=")
            if not eq or key not in FUNCTION_KEYS:
                raise ValidationError(f"bad function parameter {item!r}; keys {FUNCTION_KEYS}")
            try:
                vals[key] = complex(val) if key == "amp" else parse_angle(val)
            except ValueError:
                raise ValidationError(f"bad value in {item!r}") from None
        out = out + GaussChirpSum.of(GaussChirp(vals["amp"], vals["s"], vals["p"], vals["c"]))
    return out


def parse_list(text: str, what: str) -> list:
    try:
        vals = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ValidationError(f"cannot parse {what} list {text!r}") from None
    if not vals:
        raise ValidationError(f"{what} list is empty")
    return vals


# -- file formats -------------------------------------------------------------


def write_csv(path: Optional[str], header: Sequence[str], columns: Sequence[np.ndarray]):
    """Header row plus ``%.17g`` rows; ``path=None`` or ``-`` writes to stdout."""
    data = np.column_stack([np.asarray(c, dtype=float) for c in columns])
    lines = [",".join(header)]
    lines += [",".join(FLOAT_FMT % v for v in row) for row in data]
    text = "\n".join(lines) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8", newline="\n")


def read_csv(path: str):
    """Returns ``(header, array)``; the header row is optional."""
    with open(path, encoding="utf-8") as fh:
        first = fh.readline()
    has_header = bool(re.search(r"[A-Za-df-z_]", first))
    try:
        data = np.loadtxt(path, delimiter=",", skiprows=1 if has_header else 0, ndmin=2)
    except ValueError as exc:
        raise ValidationError(f"{path}: {exc}") from None
    header = [h.strip() for h in first.split(",")] if has_header else []
    return header, data


def read_signal(path: str, params: TransformParams) -> ComplexSignal:
    header, data = read_csv(path)
    if data.shape[1] < 3:
        raise ValidationError(f"{path}: need columns t,re,im")
    return ComplexSignal(RadialGrid(data[:, 0]), data[:, 1] + 1j * data[:, 2], params)


def write_json(path: Optional[str], payload: dict):
    text = json.dumps(_plain(payload), indent=2, allow_nan=False) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8", newline="\n")


def _plain(obj):
    """JSON-safe copy: numpy scalars unwrapped, non-finite floats as strings."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.generic):
        obj = obj.item()
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, complex):
        return [_plain(obj.real), _plain(obj.imag)]
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else str(obj)
    return str(obj)


# -- configuration ------------------------------------------------------------


@dataclass
class RunConfig:
    params: TransformParams
    grid: Optional[RadialGrid]
    spec: QuadratureSpec
    threads: int = 1
    options: dict = field(default_factory=dict)

    def describe(self) -> dict:
        p = self.params
        out = {
            "params": {"nu": p.nu, "mu": p.mu, "theta": p.theta, "kind": p.kind.value},
            "quadrature": {"rel_tol": self.spec.rel_tol, "abs_tol": self.spec.abs_tol,
                           "max_panels": self.spec.max_panels},
            "threads": self.threads,
        }
        if self.grid is not None:
            g = self.grid
            out["grid"] = {"min": float(g.nodes[0]), "max": float(g.nodes[-1]),
                           "n": len(g), "spacing": g.spacing.value}
        out.update(self.options)
        return out


def default_tol() -> float:
    env = os.environ.get(TOL_ENV)
    if env:
        try:
            return float(env)
        except ValueError:
            raise ValidationError(f"{TOL_ENV}={env!r} is not a number") from None
    return QuadratureSpec().rel_tol


def build_config(args) -> RunConfig:
    params = make_params(args.nu, args.mu, parse_angle(args.theta))
    grid = grid_from_spec(args.grid) if getattr(args, "grid", None) else None
    tol = args.tol if args.tol is not None else default_tol()
    if not tol > 0:
        raise ValidationError("tolerance must be positive")
    if args.threads < 1:
        raise ValidationError("--threads must be at least 1")
    return RunConfig(params, grid, QuadratureSpec(rel_tol=tol), args.threads)


def _sidecar_path(args) -> Optional[str]:
    if args.json_report:
        return args.json_report
    if args.output and args.output != "-":
        return args.output + ".json"
    return None


def _input(args, cfg: RunConfig):
    if args.input and args.fn:
        raise ValidationError("give either --fn or --input, not both")
    if args.input:
        return read_signal(args.input, cfg.params), {"input": args.input}
    return parse_function(args.fn or "gauss", cfg.params), {"fn": args.fn or "gauss"}


def _need_grid(cfg: RunConfig):
    if cfg.grid is None:
        raise ValidationError("--grid min:max:n[:log] is required")
    return cfg.grid


# -- commands -----------------------------------------------------------------


def _transform(args, conjugate: bool) -> int:
    cfg = build_config(args)
    grid = _need_grid(cfg)
    f, source = _input(args, cfg)
    lazy = LazyTransform(cfg.params, f, cfg.spec, conjugate, cfg.threads)
    if cfg.params.is_identity and isinstance(f, ComplexSignal) and f.grid == grid:
        values = f.values
    else:
        values = lazy(grid.nodes)
    write_csv(args.output, ["omega" if not conjugate else "t", "re", "im"],
              [grid.nodes, values.real, values.imag])
    report = {"command": "inverse" if conjugate else "transform", **cfg.describe(), **source,
              "stats": lazy.stats, "max_error_estimate": lazy.stats["max_error_estimate"]}
    if isinstance(f, GaussChirpSum) and _has_oracle(cfg.params, f):
        report["oracle_max_relative_error"] = _oracle_error(cfg.params, f, grid, values, conjugate)
    path = _sidecar_path(args)
    if path:
        write_json(path, report)
    return EXIT_OK


def _has_oracle(params, f: GaussChirpSum) -> bool:
    return (not params.is_identity and len(f.terms) == 1
            and math.isclose(f.terms[0].power, params.nu - params.mu, abs_tol=1e-14))


def _oracle_error(params, f, grid, values, conjugate):
    g = f.terms[0]
    oracle = oracle_inverse if conjugate else oracle_forward
    want = oracle(params, p=g.decay, chirp=g.chirp, amplitude=g.amplitude)(grid.nodes)
    return float(np.max(np.abs(values - want) / np.maximum(np.abs(want), 1e-300)))


def cmd_transform(args) -> int:
    return _transform(args, conjugate=False)


def cmd_inverse(args) -> int:
    return _transform(args, conjugate=True)


def cmd_roundtrip(args) -> int:
    cfg = build_config(args)
    grid = _need_grid(cfg)
    f, source = _input(args, cfg)
    if isinstance(f, ComplexSignal) and f.grid != grid:
        raise ValidationError("round trip of sampled input needs --grid equal to the input grid")
    forward = LazyTransform(cfg.params, f, cfg.spec, False)
    back = LazyTransform(cfg.params, forward, cfg.spec, True, cfg.threads)
    values = back(grid.nodes)
    orig = f(grid.nodes) if isinstance(f, GaussChirpSum) else f.values
    err = np.abs(values - orig) / np.maximum(np.abs(orig), cfg.spec.abs_tol)
    write_csv(args.output, ["t", "re", "im", "re_input", "im_input", "relative_error"],
              [grid.nodes, values.real, values.imag, orig.real, orig.imag, err])
    path = _sidecar_path(args)
    if path:
        write_json(path, {"command": "roundtrip", **cfg.describe(), **source,
                          "max_relative_error": float(err.max()),
                          "stats": {"forward": forward.stats, "inverse": back.stats}})
    return EXIT_OK


def cmd_parseval(args) -> int:
    cfg = build_config(args)
    f = parse_function(args.fn or "gauss", cfg.params)
    g = parse_function(args.fn2 or args.fn or "gauss", cfg.params)
    defect = float(parseval_defects(cfg.params, [f, g], [(0, 1)], cfg.spec)[0])
    report = {"command": "parseval", **cfg.describe(), "fn": args.fn, "fn2": args.fn2,
              "defect": defect}
    write_json(args.json_report or args.output, report)
    return EXIT_OK


def cmd_cwt(args) -> int:
    cfg = build_config(args)
    f = parse_function(args.fn or "gauss", cfg.params)
    psi = parse_function(args.psi, cfg.params)
    a_list = parse_list(args.a, "a")
    b_grid = grid_from_spec(args.b_grid)
    if cfg.params.is_identity:
        raise ValidationError("the wavelet transform is not defined at an identity angle "
                              "(distributional kernel)")
    rows = []
    for a in a_list:
        cols = [b_grid.nodes, np.full(len(b_grid), a)]
        if args.path in ("spectral", "both"):
            spec_vals = cwt_spectral(cfg.params, f, psi, b_grid, a, cfg.spec).values
            cols += [spec_vals.real, spec_vals.imag]
        if args.path in ("direct", "both"):
            direct = cwt_direct_batch(cfg.params, f, psi, b_grid.nodes, a, cfg.spec)
            cols += [direct.real, direct.imag]
        if args.path == "both":
            cols.append(np.abs(direct - spec_vals) / np.maximum(np.abs(direct), cfg.spec.abs_tol))
        rows.append(np.column_stack(cols))
    data = np.vstack(rows)
    header = ["b", "a", "re", "im"]
    if args.path == "both":
        header += ["re_direct", "im_direct", "defect"]
    write_csv(args.output, header, data.T)
    path = _sidecar_path(args)
    if path:
        report = {"command": "cwt", **cfg.describe(), "fn": args.fn, "psi": args.psi,
                  "a": a_list, "b_grid": args.b_grid, "path": args.path}
        if args.path == "both":
            report["max_defect"] = float(data[:, -1].max())
        write_json(path, report)
    return EXIT_OK


def cmd_seminorms(args) -> int:
    cfg = build_config(args)
    f = parse_function(args.fn or "gauss", cfg.params)
    signs = (1, -1) if args.sign == "both" else (int(args.sign + "1"),)
    rows, fits = [], {}
    for sign in signs:
        table = seminorm_table(f, cfg.params, sign, args.k_max, args.q_max, cfg.grid)
        for k in table.k_range:
            for q in table.q_range:
                rows.append((sign, k, q, table.S[k, q]))
        fits[str(sign)] = {
            "k": {"A": table.fit_k.A, "alpha": table.fit_k.alpha,
                  "residual": table.fit_k.residual},
            "q": {"B": table.fit_q.A, "beta": table.fit_q.alpha,
                  "residual": table.fit_q.residual},
        }
    write_csv(args.output, ["sign", "k", "q", "S"], np.array(rows, dtype=float).T)
    path = _sidecar_path(args)
    if path:
        write_json(path, {"command": "seminorms", **cfg.describe(), "fn": args.fn, "fits": fits})
    return EXIT_OK


def cmd_check_sequence(args) -> int:
    rep = check_sequence(sequence_family(args.seq), args.k_max)
    write_json(args.json_report or args.output, rep.as_dict())
    return EXIT_OK


def cmd_verify(args) -> int:
    tol = args.tol if args.tol is not None else default_tol()
    spec = QuadratureSpec(rel_tol=tol)
    names = list(SUITES) if args.suite == "all" else [args.suite]
    options = {}
    if args.seq:
        options["seq"] = args.seq
    reports = []
    for name in names:
        rep = run_suite(name, spec, workers=args.threads, **options)
        reports.append(rep)
        worst = rep.worst
        tail = (f" {'failed' if not worst.passed else 'worst'} {worst.case}: "
                f"{worst.value:.3e} {worst.relation} {worst.threshold:g}" if worst else "")
        print(f"{name}: {'PASS' if rep.passed else 'FAIL'} "
              f"{sum(c.passed for c in rep.cases)}/{len(rep.cases)} cases "
              f"in {rep.elapsed:.1f}s{tail}", file=sys.stderr)
    payload = reports[0].as_dict() if len(reports) == 1 else {
        "passed": all(r.passed for r in reports), "suites": [r.as_dict() for r in reports]}
    write_json(args.json_report or args.output, payload)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VERIFY


# -- argument parser ----------------------------------------------------------


def _common(p: argparse.ArgumentParser, grid: bool = True, fn: bool = True):
    p.add_argument("--nu", type=float, default=0.0)
    p.add_argument("--mu", type=float, default=0.0)
    p.add_argument("--theta", default="pi/2", help="radians or pi/2, pi/3, 2pi/3, ...")
    if fn:
        p.add_argument("--fn", help="builtin input, e.g. gauss:p=0.5 or oracle:p=1,c=0")
    if grid:
        p.add_argument("--grid", help="min:max:n[:log]")
    p.add_argument("--output", "-o", help="output file (default stdout)")
    p.add_argument("--json-report", help="JSON sidecar path (default OUTPUT.json)")
    p.add_argument("--tol", type=float, help=f"relative tolerance (env {TOL_ENV})")
    p.add_argument("--threads", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="frhankel",
                                     description="Fractional Hankel transform toolkit")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, fn, help_ in (("transform", cmd_transform, "forward transform"),
                            ("inverse", cmd_inverse, "inverse transform"),
                            ("roundtrip", cmd_roundtrip, "inverse of forward on a grid")):
        p = sub.add_parser(name, help=help_)
        _common(p)
        p.add_argument("--input", help="CSV with columns t,re,im")
        p.set_defaults(func=fn)

    p = sub.add_parser("parseval", help="Parseval defect of two builtin functions")
    _common(p, grid=False)
    p.add_argument("--fn2", help="second function (default: same as --fn)")
    p.set_defaults(func=cmd_parseval)

    p = sub.add_parser("cwt", help="wavelet transform on a (b, a) grid")
    _common(p, grid=False)
    p.add_argument("--psi", default="gauss:p=1", help="mother wavelet")
    p.add_argument("--b-grid", default="0.25:2:8", help="min:max:n[:log]")
    p.add_argument("--a", default="1", help="comma-separated scales")
    p.add_argument("--path", choices=("direct", "spectral", "both"), default="spectral")
    p.set_defaults(func=cmd_cwt)

    p = sub.add_parser("seminorms", help="seminorm table S(k, q) with growth fits")
    _common(p)
    p.add_argument("--k-max", type=int, default=12)
    p.add_argument("--q-max", type=int, default=6)
    p.add_argument("--sign", choices=("+", "-", "both"), default="both")
    p.set_defaults(func=cmd_seminorms)

    p = sub.add_parser("verify", help="run a bundled verification suite")
    p.add_argument("suite", choices=sorted(SUITES) + ["all"])
    p.add_argument("--seq", action="append", help="sequence spec (sequences suite)")
    p.add_argument("--output", "-o", help="JSON report path (default stdout)")
    p.add_argument("--json-report", help="alias for --output")
    p.add_argument("--tol", type=float)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("check-sequence", help="sequence axiom report")
    p.add_argument("--seq", required=True, help="factorial_pow:s, gevrey:alpha, const[:c]")
    p.add_argument("--k-max", type=int, default=30)
    p.add_argument("--output", "-o")
    p.add_argument("--json-report")
    p.set_defaults(func=cmd_check_sequence)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (NoConvergence, TruncationFailure) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except FrHankelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
