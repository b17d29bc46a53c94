"""Command-line front end.

    fh-gauss compute|verify|iterate --config run.toml [--out DIR]
             [--format json|csv] [--precision-bits N] [--n-max N]

Config (TOML)::

    ts = [-0.6, 0.8]
    gammas = [0.5, 1.5]
    precision_bits = 256      # optional
    quad_tol = "1e-30"        # optional
    n_max = 12                # optional
    suite = "all"             # orthopoly | ladder | identities | dynamics | all
    tolerance = "1e-27"       # optional override for every check
    iterate_bound = "1e-12"   # optional, used by ``iterate``
    step = "1e-8"             # optional finite-difference step
    dynamics_n = [1, 5]       # optional degrees for the dynamics suite

    [sweep.t1]                # optional grid; one table per swept coordinate
    start = -0.7
    stop = -0.5
    steps = 3

Exit codes: 0 success, 1 config error, 2 numerical failure or failed
checks, 3 I/O error.  Output is written in grid order and is
byte-identical across runs of the same config and version.
"""

import argparse
import csv
import io
import itertools
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from decimal import Decimal

from mpmath import mp, mpf

from . import __version__
from .cauchy import aux_quantities
from .dynamics import DEFAULT_STEP, verify_dynamics
from .errors import ConfigError, NumericalError
from .identities import verify_iteration, verify_p_expression, verify_section3
from .ladder import verify_ladder
from .orthopoly import build_system, hankel_det, verify_orthopoly
from .weight import DEFAULT_PRECISION, DEFAULT_QUAD_TOL, WeightSpec

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

SUITES = ("orthopoly", "ladder", "identities", "dynamics")
EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3
VALUE_DIGITS = 20
KNOWN_KEYS = {"ts", "gammas", "precision_bits", "quad_tol", "n_max", "suite", "tolerance",
              "iterate_bound", "step", "dynamics_n", "sweep"}


class RunConfig:
    def __init__(self, raw):
        unknown = set(raw) - KNOWN_KEYS
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        for key in ("ts", "gammas"):
            if key not in raw or not isinstance(raw[key], list):
                raise ConfigError(f"'{key}' must be a list")
        self.ts = [_num(v, "ts") for v in raw["ts"]]
        self.gammas = [_num(v, "gammas") for v in raw["gammas"]]
        self.precision_bits = _int(raw.get("precision_bits", DEFAULT_PRECISION), "precision_bits")
        self.quad_tol = str(raw.get("quad_tol", DEFAULT_QUAD_TOL))
        self.n_max = _int(raw.get("n_max", 12), "n_max")
        if self.n_max < 1:
            raise ConfigError("n_max must be >= 1")
        suite = raw.get("suite", "all")
        if suite != "all" and suite not in SUITES:
            raise ConfigError(f"unknown suite {suite!r}")
        self.suites = SUITES if suite == "all" else (suite,)
        self.tolerance = None if raw.get("tolerance") is None else str(raw["tolerance"])
        self.iterate_bound = str(raw.get("iterate_bound", "1e-12"))
        self.step = str(raw.get("step", DEFAULT_STEP))
        dn = raw.get("dynamics_n")
        self.dynamics_n = None if dn is None else [_int(v, "dynamics_n") for v in dn]
        self.sweep = _parse_sweep(raw.get("sweep", {}), len(self.ts))
        for v in (self.quad_tol, self.iterate_bound, self.step) + ((self.tolerance,) if self.tolerance else ()):
            _num(v, "numeric string")
        # validate every grid point up front
        self.points()
        self.spec_at(self.ts)

    def spec_at(self, ts):
        return WeightSpec(tuple(ts), tuple(self.gammas), self.precision_bits, self.quad_tol)

    def points(self):
        axes = []
        for k, base in enumerate(self.ts):
            axes.append(self.sweep.get(k, [base]))
        pts = [list(p) for p in itertools.product(*axes)]
        for p in pts:
            if any(not Decimal(a) < Decimal(b) for a, b in zip(p, p[1:])):
                raise ConfigError(f"sweep point {p} is not strictly increasing")
        return pts

    def echo(self):
        return {
            "ts": self.ts,
            "gammas": self.gammas,
            "precision_bits": self.precision_bits,
            "quad_tol": self.quad_tol,
            "n_max": self.n_max,
            "suites": list(self.suites),
            "tolerance": self.tolerance,
            "iterate_bound": self.iterate_bound,
            "step": self.step,
            "dynamics_n": self.dynamics_n,
            "sweep": {f"t{k + 1}": v for k, v in sorted(self.sweep.items())},
        }


def _num(v, what):
    if isinstance(v, bool) or not isinstance(v, (int, str, Decimal)):
        raise ConfigError(f"{what}: expected a number, got {v!r}")
    try:
        d = Decimal(str(v))
    except ArithmeticError:
        raise ConfigError(f"{what}: cannot parse {v!r}") from None
    if not d.is_finite():
        raise ConfigError(f"{what}: must be finite")
    return str(v)


def _int(v, what):
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"{what} must be an integer")
    return v


def _parse_sweep(raw, N):
    if not isinstance(raw, dict):
        raise ConfigError("'sweep' must be a table")
    out = {}
    for key, body in raw.items():
        if not (key.startswith("t") and key[1:].isdigit() and 1 <= int(key[1:]) <= N):
            raise ConfigError(f"sweep key {key!r} must be t1..t{N}")
        if not isinstance(body, dict) or set(body) != {"start", "stop", "steps"}:
            raise ConfigError(f"sweep.{key} needs start, stop, steps")
        start = Decimal(_num(body["start"], "sweep start"))
        stop = Decimal(_num(body["stop"], "sweep stop"))
        steps = _int(body["steps"], "sweep steps")
        if steps < 1:
            raise ConfigError("sweep steps must be >= 1")
        if steps == 1:
            vals = [start]
        else:
            vals = [start + (stop - start) * i / (steps - 1) for i in range(steps)]
        out[int(key[1:]) - 1] = [str(v.normalize()) if v else "0" for v in vals]
    return out


def load_config(path, overrides):
    try:
        with open(path, "rb") as fh:
            text = fh.read()
    except OSError as exc:
        raise OSError(f"cannot read config {path}: {exc.strerror}") from None
    try:
        raw = tomllib.loads(text.decode("utf-8"), parse_float=Decimal)
    except (UnicodeDecodeError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    raw.update({k: v for k, v in overrides.items() if v is not None})
    return RunConfig(raw)


# work units (module level so they pickle)

def _fmt(v):
    return mp.nstr(v, VALUE_DIGITS, strip_zeros=False)


def compute_point(cfg, ts):
    spec = cfg.spec_at(ts)
    with mp.workprec(spec.precision_bits):
        sys_ = build_system(spec, cfg.n_max)
        aux = aux_quantities(sys_)
        rows = []
        for n in range(cfg.n_max + 1):
            row = {"ts": list(ts), "n": n, "h": _fmt(sys_.h[n]), "alpha": _fmt(sys_.alpha[n]),
                   "beta": _fmt(sys_.beta[n]), "p": _fmt(sys_.p_coeff[n]),
                   "D": _fmt(hankel_det(sys_, n)), "sigma": _fmt(2 * sys_.p_coeff[n])}
            for j in range(spec.N):
                row[f"R{j + 1}"] = _fmt(aux.R[n][j])
                row[f"r{j + 1}"] = _fmt(aux.r[n][j])
            rows.append(row)
        return rows


def verify_point(cfg, ts):
    spec = cfg.spec_at(ts)
    reports = []
    with mp.workprec(spec.precision_bits):
        sys_ = build_system(spec, cfg.n_max)
        aux = aux_quantities(sys_)
        if "orthopoly" in cfg.suites:
            reports += verify_orthopoly(sys_)
        if "ladder" in cfg.suites:
            reports += verify_ladder(sys_, aux)
        if "identities" in cfg.suites:
            for n in range(cfg.n_max + 1):
                reports += verify_section3(sys_, aux, n)
                if all(spec.gammas):
                    reports.append(verify_p_expression(sys_, aux, n))
        if "dynamics" in cfg.suites:
            ns = cfg.dynamics_n or sorted({1, max(1, cfg.n_max // 2), cfg.n_max - 1})
            if max(ns) + 1 > cfg.n_max:
                raise ConfigError("dynamics_n entries must be below n_max")
            reports += verify_dynamics(spec, ns, n_max=cfg.n_max, h=cfg.step)
        if cfg.tolerance is not None:
            tol = mpf(cfg.tolerance)
            for r in reports:
                r.tolerance = tol
                r.passed = bool(r.residual <= tol)
        return [dict(r.as_row(), ts=list(ts)) for r in reports]


def iterate_point(cfg, ts):
    spec = cfg.spec_at(ts)
    with mp.workprec(spec.precision_bits):
        sys_ = build_system(spec, cfg.n_max)
        aux = aux_quantities(sys_)
        _, reports = verify_iteration(sys_, aux, cfg.iterate_bound)
        return [dict(r.as_row(), ts=list(ts)) for r in reports]


WORK = {"compute": compute_point, "verify": verify_point, "iterate": iterate_point}


def _workers(count):
    env = os.environ.get("FH_GAUSS_THREADS")
    cap = os.cpu_count() or 1
    if env:
        try:
            cap = max(1, int(env))
        except ValueError:
            raise ConfigError("FH_GAUSS_THREADS must be an integer") from None
    return max(1, min(cap, count))


def run(command, cfg):
    points = cfg.points()
    fn = WORK[command]
    workers = _workers(len(points))
    if workers == 1:
        results = [fn(cfg, p) for p in points]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(fn, [cfg] * len(points), points))
    return [row for chunk in results for row in chunk]


def summarize(rows):
    worst = {}
    for r in rows:
        name = r["identity"]
        val = mpf(r["residual"])
        if name not in worst or val > worst[name][0]:
            worst[name] = (val, r["residual"])
    failed = sum(1 for r in rows if not r["pass"])
    return {"checks": len(rows), "failed": failed,
            "max_residual": {k: v[1] for k, v in sorted(worst.items())}}


def render(command, cfg, rows, fmt):
    if fmt == "json":
        doc = {"config_echo": cfg.echo(), "version": __version__}
        if command == "compute":
            doc["rows"] = rows
        else:
            doc["summary"] = summarize(rows)
            doc["reports"] = rows
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    if command == "compute":
        fields = list(rows[0].keys()) if rows else ["ts", "n"]
    else:
        fields = ["ts", "identity", "anchor", "params", "residual", "tolerance", "pass", "note"]
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        flat = dict(row)
        flat["ts"] = " ".join(row["ts"])
        if "params" in flat:
            flat["params"] = ";".join(f"{k}={v}" for k, v in sorted(row["params"].items()))
        writer.writerow({k: flat.get(k, "") for k in fields})
    return buf.getvalue()


def build_parser():
    ap = argparse.ArgumentParser(prog="fh-gauss", description=__doc__.split("\n")[0])
    ap.add_argument("command", choices=sorted(WORK))
    ap.add_argument("--config", required=True)
    ap.add_argument("--out", default=".")
    ap.add_argument("--format", choices=("json", "csv"), default="json")
    ap.add_argument("--precision-bits", type=int, dest="precision_bits")
    ap.add_argument("--n-max", type=int, dest="n_max")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, {"precision_bits": args.precision_bits, "n_max": args.n_max})
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        rows = run(args.command, cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    text = render(args.command, cfg, rows, args.format)
    path = os.path.join(args.out, f"{args.command}.{args.format}")
    try:
        os.makedirs(args.out, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO
    if args.command == "compute":
        print(f"wrote {len(rows)} rows to {path}")
        return EXIT_OK
    s = summarize(rows)
    print(f"{s['checks']} checks, {s['failed']} failed; report in {path}")
    for r in rows:
        if not r["pass"]:
            print(f"FAIL {r['identity']} {r['params']} residual={r['residual']} tol={r['tolerance']}")
    return EXIT_OK if s["failed"] == 0 else EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
