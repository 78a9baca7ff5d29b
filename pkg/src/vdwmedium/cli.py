"""Command-line front end: ``vdw-medium {energy,sweep,dratio,validate}``.

Values are in natural units.  Option precedence is: explicit flag, then the
``--config`` JSON file (keys are the long option names with ``-`` replaced
by ``_``), then built-in defaults.

Exit codes: 0 success, 1 usage or JSON spec error, 2 quadrature did not
converge (for ``validate``: nonzero if any check failed).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import energies as en
from .errors import DomainError, SingularityError, SpecError
from .materials import medium_from_spec, particle_from_spec
from .quadrature import QuadratureConfig

EXIT_OK, EXIT_USAGE, EXIT_NONCONVERGED = 0, 1, 2

_METHODS = {"modesum": "mode_sum", "green": "green_trace", "both": "both"}

_DEFAULTS = {
    "common": {"rel_tol": 1e-9, "abs_tol": 1e-14, "out": None, "unit_scale": 1.0},
    "energy": {"atom_a": None, "atom_b": None, "medium": "vacuum", "method": "modesum",
               "terms": ["all"], "format": "json"},
    "sweep": {"atom_a": None, "atom_b": None, "medium": "vacuum", "method": "modesum",
              "terms": ["all"], "r_min": None, "r_max": None, "points": 20, "spacing": "log",
              "format": "csv"},
    "dratio": {"C": None, "r_min": 1e-4, "r_max": 10.0, "points": 50, "spacing": "log", "format": "csv"},
    "validate": {"quick": False},
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_float(text):
    v = float(text)
    if not (math.isfinite(v) and v > 0):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return v


def build_parser():
    parser = _Parser(prog="vdw-medium", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--rel-tol", type=_positive_float, help="quadrature relative tolerance (1e-9)")
        p.add_argument("--abs-tol", type=_positive_float, help="quadrature absolute tolerance (1e-14)")
        p.add_argument("--config", help="JSON file supplying any option")
        p.add_argument("--out", help="output file (default: standard output)")

    def interaction(p):
        p.add_argument("--atom-a", help='particle A, e.g. \'{"electric": {"static": 1}}\' or @file.json')
        p.add_argument("--atom-b", help="particle B, same format as --atom-a")
        p.add_argument("--medium", help='host medium JSON or "vacuum"')
        p.add_argument("--method", choices=sorted(_METHODS))
        p.add_argument("--terms", action="append", help="ee, mm, em or all; repeatable or comma separated")
        p.add_argument("--unit-scale", type=_positive_float, help="multiply reported energies by this factor")

    def grid(p):
        p.add_argument("--r-min", type=_positive_float)
        p.add_argument("--r-max", type=_positive_float)
        p.add_argument("--points", type=int)
        p.add_argument("--spacing", choices=["lin", "log"])

    kw = {"argument_default": argparse.SUPPRESS}
    p = sub.add_parser("energy", help="energies at one separation", **kw)
    p.add_argument("--separation", type=_positive_float, help="centre-to-centre distance R")
    interaction(p)
    p.add_argument("--format", choices=["json", "csv"])
    common(p)

    p = sub.add_parser("sweep", help="energies over a grid of separations (CSV)", **kw)
    interaction(p)
    grid(p)
    p.add_argument("--format", choices=["csv"])
    common(p)

    p = sub.add_parser("dratio", help="ratio to the London energy for two-level atoms (CSV)", **kw)
    p.add_argument("--C", type=float, action="append", help="host coupling; repeatable")
    grid(p)
    p.add_argument("--format", choices=["csv"])
    common(p)

    p = sub.add_parser("validate", help="run the built-in acceptance checks", **kw)
    p.add_argument("--quick", action="store_true", help="smaller grids")
    common(p)
    return parser


def _load_config(path, command):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"config: cannot read {path}: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError("config: top level must be an object")
    allowed = set(_DEFAULTS["common"]) | set(_DEFAULTS[command])
    if command == "energy":
        allowed.add("separation")
    for key in data:
        if key not in allowed:
            raise UsageError(f"config.{key}: not an option of '{command}'")
    return data


def resolve(args):
    """Merge defaults, config file and explicit flags into one dict."""
    command = args.command
    opts = {**_DEFAULTS["common"], **_DEFAULTS[command]}
    if command == "energy":
        opts["separation"] = None
    given = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    if getattr(args, "config", None):
        opts.update(_load_config(args.config, command))
    opts.update(given)
    opts["command"] = command
    return opts


def _json_arg(value, name):
    if isinstance(value, (dict, list)):
        return value
    if value is None:
        raise UsageError(f"{name}: required")
    text = str(value)
    if text.startswith("@"):
        try:
            with open(text[1:]) as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"{name}: {exc}") from None
    if text == "vacuum":
        return text
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{name}: invalid JSON ({exc.msg})") from None


def _terms(raw):
    if isinstance(raw, str):
        raw = [raw]
    out = []
    for item in raw:
        for t in str(item).split(","):
            t = t.strip()
            if t == "all":
                out.extend(en.TERMS)
            elif t in en.TERMS:
                out.append(t)
            else:
                raise UsageError(f"terms: unknown term {t!r}")
    return tuple(dict.fromkeys(out))


def _quad(opts):
    try:
        return QuadratureConfig(rel_tol=float(opts["rel_tol"]), abs_tol=float(opts["abs_tol"]))
    except (DomainError, TypeError, ValueError) as exc:
        raise UsageError(f"tolerance: {exc}") from None


def _grid(opts):
    r_min, r_max, points = opts["r_min"], opts["r_max"], opts["points"]
    if r_min is None or r_max is None:
        raise UsageError("r_min/r_max: required")
    r_min, r_max, points = float(r_min), float(r_max), int(points)
    if not (0 < r_min < r_max):
        raise UsageError("r_min: must satisfy 0 < r_min < r_max")
    if points < 2:
        raise UsageError("points: must be >= 2")
    if opts["spacing"] == "log":
        return np.geomspace(r_min, r_max, points)
    if opts["spacing"] == "lin":
        return np.linspace(r_min, r_max, points)
    raise UsageError("spacing: must be 'lin' or 'log'")


def _num(x):
    return format(float(x), ".17g")


def _setup(opts):
    a = particle_from_spec(_json_arg(opts["atom_a"], "atom_a"), "atom_a")
    b = particle_from_spec(_json_arg(opts["atom_b"], "atom_b"), "atom_b")
    medium = medium_from_spec(_json_arg(opts["medium"], "medium"), "medium")
    method = opts["method"]
    if method not in _METHODS:
        raise UsageError(f"method: must be one of {sorted(_METHODS)}")
    return a, b, medium, _METHODS[method], _terms(opts["terms"]), _quad(opts)


def _threads():
    raw = os.environ.get("VDW_THREADS")
    if raw is None:
        return min(4, os.cpu_count() or 1)
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 1:
        raise UsageError("VDW_THREADS: must be a positive integer")
    return n


def cmd_energy(opts):
    if opts["separation"] is None:
        raise UsageError("separation: required")
    a, b, medium, method, terms, cfg = _setup(opts)
    R = float(opts["separation"])
    if not R > 0:
        raise UsageError("separation: must be > 0")
    bd = en.w_total(en.InteractionQuery(a, b, R, medium, method, terms, cfg))
    s = float(opts["unit_scale"])
    payload = {
        "R": R,
        "W_ee": bd.W_ee * s,
        "W_mm": bd.W_mm * s,
        "W_em": bd.W_em * s,
        "W_total": bd.W_total * s,
        "method": opts["method"],
        "err": {k: q.error * s for k, q in bd.quad.items()},
        "converged": bd.converged,
    }
    if bd.path_discrepancy is not None:
        payload["path_discrepancy"] = bd.path_discrepancy
    if opts["format"] == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["R", "W_ee", "W_mm", "W_em", "W_total", "err_est", "converged"])
        w.writerow([_num(R), _num(payload["W_ee"]), _num(payload["W_mm"]), _num(payload["W_em"]),
                    _num(payload["W_total"]), _num(bd.error * s), str(bd.converged).lower()])
        text = buf.getvalue()
    else:
        text = json.dumps(payload, indent=2) + "\n"
    return text, EXIT_OK if bd.converged else EXIT_NONCONVERGED


def cmd_sweep(opts):
    a, b, medium, method, terms, cfg = _setup(opts)
    Rs = _grid(opts)
    s = float(opts["unit_scale"])

    def point(R):
        return en.w_total(en.InteractionQuery(a, b, float(R), medium, method, terms, cfg))

    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        rows = list(pool.map(point, Rs))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["R", "W_ee", "W_mm", "W_em", "W_total", "err_est"])
    for R, bd in zip(Rs, rows):
        w.writerow([_num(R)] + [_num(v * s) for v in (bd.W_ee, bd.W_mm, bd.W_em, bd.W_total, bd.error)])
    ok = all(bd.converged for bd in rows)
    return buf.getvalue(), EXIT_OK if ok else EXIT_NONCONVERGED


def _label(C):
    return "D_C" + format(C, "g")


def cmd_dratio(opts):
    Cs = opts["C"]
    if Cs is None or (isinstance(Cs, list) and not Cs):
        raise UsageError("C: at least one value required")
    Cs = [float(c) for c in (Cs if isinstance(Cs, list) else [Cs])]
    if any(not (math.isfinite(c) and c >= 0) for c in Cs):
        raise UsageError("C: values must be finite and >= 0")
    rs = _grid(opts)
    cfg = _quad(opts)
    results = {C: [en.d_ratio(float(r), C, cfg) for r in rs] for C in Cs}
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["r"] + [_label(C) for C in Cs])
    for i, r in enumerate(rs):
        w.writerow([_num(r)] + [_num(results[C][i].value) for C in Cs])
    ok = all(res.converged for col in results.values() for res in col)
    return buf.getvalue(), EXIT_OK if ok else EXIT_NONCONVERGED


def cmd_validate(opts):
    from .validation import run_checks

    results = run_checks(_quad(opts), quick=bool(opts["quick"]))
    lines = [r.line() for r in results]
    failed = sum(not r.passed for r in results)
    lines.append(f"{len(results) - failed}/{len(results)} checks passed")
    if failed == 0:
        code = EXIT_OK
    elif any(r.nonconverged for r in results):
        code = EXIT_NONCONVERGED
    else:
        code = EXIT_USAGE
    return "\n".join(lines) + "\n", code


_COMMANDS = {"energy": cmd_energy, "sweep": cmd_sweep, "dratio": cmd_dratio, "validate": cmd_validate}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        opts = resolve(args)
        text, code = _COMMANDS[args.command](opts)
    except (UsageError, SpecError, DomainError, SingularityError) as exc:
        print(f"vdw-medium {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if opts["out"]:
        with open(opts["out"], "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
