"""Command-line front end: ``paracalc <subcommand> [--flag value]...``.

Exit codes: 0 success, 1 a verification inside the run failed, 2 invalid
arguments or unusable output path.
"""

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile

import numpy as np

from . import dyadic, regcalc
from .errors import ParacalcError, PreconditionError
from .green import BoundaryData
from .paraproduct import apply_L, extend, paralinearize, paraproduct, restrict
from .parametrix import (ROUNDOFF_FLOOR, ParametrixConfig, fitted_order, refinement_study,
                         rough_domain_function, smoothing_profile)
from .render import region_svg

SEED_ENV = "PARACALC_SEED"

DECOMPOSITION_TOL = 1e-10
IDENTITY_TOL = 1e-12
SMOOTHNESS_TOL = 0.15
GAIN_BAND = 0.3
MIN_ORDER = 2.0
CALIBRATION_SIGMAS = (0.75, 1.0, 1.5, 2.0, 3.0)
PROFILE_SIGMAS = (0.75, 1.5)


# single-letter flags whose names collide once lower-cased (--N vs --n)
CONFIG_KEYS = {"J": "grid_level", "N": "series_length", "M": "extension_order",
               "n": "dimension"}


class UsageError(Exception):
    pass


class Outcome:
    """What a subcommand produced: JSON results, CSV rows, text summary."""

    def __init__(self, results, rows, summary, ok=True, witness_path=None, svg=None):
        self.results = results
        self.rows = rows
        self.summary = summary
        self.ok = ok
        self.witness_path = witness_path
        self.svg = svg


# ---------------------------------------------------------------- parsing

def parse_modes(text):
    """'1:0.3,2:0.1' -> [(1, 0.3), (2, 0.1)]."""
    if not text:
        return []
    modes = []
    for item in text.split(","):
        try:
            k, amp = item.split(":")
            modes.append((int(k), float(amp)))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad mode entry {item!r}, expected k:amp")
    return modes


def _add_output(p):
    p.add_argument("--out", default=None, help="artifact path (written atomically)")
    p.add_argument("--format", choices=("csv", "json", "svg"), default=None)


def build_parser():
    parser = argparse.ArgumentParser(prog="paracalc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("domains", help="rasterize D(A), D(N), D(L_u), D_u")
    p.add_argument("--s0", type=float, required=True)
    p.add_argument("--p0", type=float, required=True)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--s-min", type=float, default=-1.0)
    p.add_argument("--s-max", type=float, default=3.0)
    p.add_argument("--invp-min", type=float, default=0.0)
    p.add_argument("--invp-max", type=float, default=1.0)
    p.add_argument("--resolution", type=int, default=200)
    _add_output(p)

    p = sub.add_parser("minimal-n", help="minimal N with (R L_u)^N : H^s0_p0 -> H^t_r")
    p.add_argument("--s0", type=float)
    p.add_argument("--p0", type=float)
    p.add_argument("--t", type=float)
    p.add_argument("--r", type=float)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--eps", type=float, default=regcalc.DEFAULT_EPSILON)
    p.add_argument("--max-n", type=int, default=regcalc.DEFAULT_MAX_N)
    p.add_argument("--samples", type=int, default=0,
                   help="also search this many random pairs for beyond-bootstrap witnesses")
    p.add_argument("--seed", type=int, default=0)
    _add_output(p)

    p = sub.add_parser("verify", help="parametrix-formula refinement study")
    p.add_argument("--modes", type=parse_modes, default=parse_modes("1:1"))
    p.add_argument("--cos-modes", type=parse_modes, default=[])
    p.add_argument("--phi0", type=float, default=0.0)
    p.add_argument("--phi1", type=float, default=0.0)
    p.add_argument("--J", type=int, default=12)
    p.add_argument("--N", type=int, default=3)
    p.add_argument("--M", type=int, default=4)
    _add_output(p)

    p = sub.add_parser("paraproduct-check", help="paraproduct and paralinearization identities")
    p.add_argument("--J", type=int, default=10)
    p.add_argument("--M", type=int, default=4)
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    _add_output(p)

    p = sub.add_parser("smoothness", help="calibrate the block-decay smoothness estimator")
    p.add_argument("--J", type=int, default=12)
    p.add_argument("--sigma", type=float, action="append", default=None)
    p.add_argument("--samples", type=int, default=5, help="seeds per sigma")
    p.add_argument("--seed", type=int, default=0)
    _add_output(p)

    p = sub.add_parser("smoothing-profile", help="per-iterate smoothing gain of R L_u")
    p.add_argument("--s0", type=float, action="append", default=None,
                   help="roughness of the synthesized a priori u (repeatable)")
    p.add_argument("--J", type=int, default=12)
    p.add_argument("--N", type=int, default=2)
    p.add_argument("--M", type=int, default=4)
    p.add_argument("--samples", type=int, default=1, help="seeds per roughness")
    p.add_argument("--seed", type=int, default=0)
    _add_output(p)
    return parser


def _seed(args):
    env = os.environ.get(SEED_ENV)
    if env is not None and env.strip():
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"{SEED_ENV}={env!r} is not an integer")
    return args.seed


# ---------------------------------------------------------------- commands

def cmd_domains(args):
    apriori = regcalc.SmoothnessPoint(args.s0, args.p0, args.n)
    window = (args.s_min, args.s_max, args.invp_min, args.invp_max)
    grid = regcalc.rasterize_domains(apriori, window, args.resolution)

    counts = {name: int(grid.layer(flag).sum()) for flag, name in regcalc.FLAG_NAMES.items()}
    nested = None
    if regcalc.in_domain_A(apriori) and regcalc.in_domain_N(apriori):
        in_n = grid.layer(regcalc.FLAG_N) & grid.layer(regcalc.FLAG_A)
        violations = int((in_n & ~grid.layer(regcalc.FLAG_LU)).sum())
        nested = violations == 0
    rows = []
    for i, s in enumerate(grid.s_values):
        for k, ip in enumerate(grid.invp_values):
            f = int(grid.flags[i, k])
            rows.append({"invp": float(ip), "s": float(s),
                         **{name: int(bool(f & flag)) for flag, name in regcalc.FLAG_NAMES.items()}})
    results = {"pixel_counts": counts, "shape": list(grid.flags.shape),
               "nesting_checked": nested is not None, "nesting_holds": nested}
    summary = [f"{name}: {c} pixels" for name, c in counts.items()]
    if nested is not None:
        summary.append(f"D(N) inside D(L_u): {'yes' if nested else 'NO'}")
    return Outcome(results, rows, summary, ok=nested is not False, svg=region_svg(grid))


def _path_json(path):
    return [{"s": st.s, "p": st.p, "move": st.move} for st in path]


def cmd_minimal_n(args):
    single = [args.s0, args.p0, args.t, args.r]
    if any(v is None for v in single) and args.samples <= 0:
        raise UsageError("minimal-n needs --s0 --p0 --t --r, or --samples > 0")
    results, rows, summary = {}, [], []
    witness = None
    ok = True
    if all(v is not None for v in single):
        apriori = regcalc.SmoothnessPoint(args.s0, args.p0, args.n)
        target = regcalc.SmoothnessPoint(args.t, args.r, args.n)
        res = regcalc.minimal_N(apriori, target, args.eps, args.max_n)
        witness = _path_json(res.path)
        results.update({
            "n_iterations": res.N, "omega": res.omega.omega, "gain_per_step": res.omega.gain,
            "policy": res.policy, "bootstrap_n": res.bootstrap_N,
            "bootstrap_path": _path_json(res.bootstrap_path),
            "target_in_domain_n": regcalc.in_domain_N(target),
            "beyond_bootstrap": res.beyond_bootstrap,
        })
        summary.append(f"N={res.N if res.reachable else 'unreachable'}")
        summary.append(f"omega={res.omega.omega:.6g} gain/step={res.omega.gain:.6g}")
        for st in res.path:
            summary.append(f"  {st.move:5s} (s={st.s:.6g}, p={st.p:.6g})")
        summary.append(f"bootstrap inside D(N): "
                       f"{'N=' + str(res.bootstrap_N) if res.bootstrap_N is not None else 'none'}")
        rows.extend({"index": i, "s": st.s, "p": st.p, "move": st.move}
                    for i, st in enumerate(res.path))
    if args.samples > 0:
        found = regcalc.search_beyond_bootstrap(args.samples, _seed(args), args.n,
                                                args.eps, args.max_n)
        results["search"] = {
            "samples": args.samples,
            "witnesses": [
                {"s0": a.s, "p0": a.p, "t": t.s, "r": t.p, "n_iterations": res.N,
                 "path": _path_json(res.path)}
                for a, t, res in found],
        }
        summary.append(f"beyond-bootstrap witnesses: {len(found)} of {args.samples} samples")
        for a, t, res in found[:5]:
            summary.append(f"  (s0={a.s:.4f}, p0={a.p:.4f}) -> (t={t.s:.4f}, r={t.p:.4f}): "
                           f"N={res.N}, target outside D(N), no bootstrap path")
        if not rows:
            rows = [{"s0": a.s, "p0": a.p, "t": t.s, "r": t.p, "n_iterations": res.N}
                    for a, t, res in found]
        ok = bool(found)
    return Outcome(results, rows, summary, ok=ok, witness_path=witness)


def cmd_verify(args):
    levels = list(range(max(dyadic.MIN_LEVEL, args.J - 3), args.J + 1))
    boundary = BoundaryData(args.phi0, args.phi1)
    ParametrixConfig(N=args.N, M=args.M)
    rows_raw = refinement_study(args.modes, boundary, levels, args.N, args.M, args.cos_modes)
    errs = [e for _, e in rows_raw]
    order = fitted_order(levels, errs)
    decreasing = all(b <= a or b <= ROUNDOFF_FLOOR for a, b in zip(errs, errs[1:]))
    ok = decreasing and order >= MIN_ORDER
    rows = [{"J": J, "sup_residual": e} for J, e in rows_raw]
    results = {"levels": levels, "sup_residuals": errs,
               "fitted_order": None if math.isinf(order) else order,
               "converged_to_roundoff": math.isinf(order),
               "decreasing": decreasing, "passed": ok}
    summary = [f"J={J:2d}  sup-residual={e:.3e}" for J, e in rows_raw]
    summary.append("fitted order: " + ("roundoff floor reached" if math.isinf(order)
                                       else f"{order:.3f}") + f" (need >= {MIN_ORDER})")
    return Outcome(results, rows, summary, ok=ok)


def cmd_paraproduct_check(args):
    grid = dyadic.make_grid(args.J)
    part = dyadic.default_partition(grid)
    rng = np.random.default_rng(_seed(args))
    rows, worst_dec, worst_id = [], 0.0, 0.0
    for i in range(args.samples):
        g = dyadic.GridFunction(grid, rng.standard_normal(grid.n_points))
        h = dyadic.GridFunction(grid, rng.standard_normal(grid.n_points))
        total = sum((paraproduct(k, g, h, part) for k in (1, 2, 3)),
                    dyadic.GridFunction(grid, np.zeros(grid.n_points)))
        err = np.max(np.abs(g.values * h.values - total.values)) / (g.sup_norm() * h.sup_norm())
        worst_dec = max(worst_dec, err)
        rows.append({"check": "decomposition", "index": i, "relative_error": float(err)})
    n_id = min(args.samples, 20)
    for i in range(n_id):
        u = rough_domain_function(1.5, int(rng.integers(2 ** 31)), grid) + rng.standard_normal()
        L = paralinearize(u, part, args.M)
        lu = extend(u, args.M)
        expected = -restrict(lu * lu.derivative()).values
        got = apply_L(L, u).values
        err = np.max(np.abs(got - expected)) / np.max(np.abs(expected))
        worst_id = max(worst_id, err)
        rows.append({"check": "paralinearization", "index": i, "relative_error": float(err)})
    ok = worst_dec <= DECOMPOSITION_TOL and worst_id <= IDENTITY_TOL
    results = {"max_decomposition_error": float(worst_dec),
               "max_paralinearization_error": float(worst_id), "passed": ok}
    summary = [f"decomposition g*h = pi1+pi2+pi3: max rel. error {worst_dec:.2e} "
               f"over {args.samples} pairs (tol {DECOMPOSITION_TOL:g})",
               f"L_u(u) = -u du: max rel. error {worst_id:.2e} over {n_id} u "
               f"(tol {IDENTITY_TOL:g})"]
    return Outcome(results, rows, summary, ok=ok)


def cmd_smoothness(args):
    grid = dyadic.make_grid(args.J)
    part = dyadic.default_partition(grid)
    sigmas = args.sigma or list(CALIBRATION_SIGMAS)
    base = _seed(args)
    rows, worst = [], 0.0
    for sigma in sigmas:
        for seed in range(base, base + args.samples):
            g = dyadic.synthesize_rough(sigma, seed, grid)
            est = dyadic.estimate_smoothness(dyadic.block_norms(part, g, 2.0))
            worst = max(worst, abs(est - sigma))
            rows.append({"sigma": sigma, "seed": seed, "estimate": est, "error": est - sigma})
    ok = worst <= SMOOTHNESS_TOL
    results = {"max_abs_error": worst, "tolerance": SMOOTHNESS_TOL, "passed": ok}
    summary = [f"sigma={r['sigma']:.2f} seed={r['seed']}: estimate {r['estimate']:.4f}"
               for r in rows]
    summary.append(f"max |error| = {worst:.4f} (tol {SMOOTHNESS_TOL})")
    return Outcome(results, rows, summary, ok=ok)


def cmd_smoothing_profile(args):
    grid = dyadic.make_grid(args.J)
    cfg = ParametrixConfig(N=args.N, M=args.M)
    base = _seed(args)
    rows, summary, ok = [], [], True
    for sigma0 in args.s0 or list(PROFILE_SIGMAS):
        omega = regcalc.order_omega(regcalc.SmoothnessPoint(sigma0, 2.0, 1)).omega
        expected = 2.0 - omega
        for seed in range(base, base + args.samples):
            u = rough_domain_function(sigma0, seed, grid)
            rep = smoothing_profile(u, cfg, 2.0)
            for k, sig in enumerate(rep.sigmas):
                gain = rep.gains[k] if k < len(rep.gains) else None
                within = None if gain is None else abs(gain - expected) <= GAIN_BAND
                if k < len(rep.gains) and not within:
                    ok = False
                rows.append({"sigma0": sigma0, "seed": seed, "k": k, "sigma_k": sig,
                             "gain": gain, "expected_gain": expected, "within_band": within})
            summary.append(
                f"sigma0={sigma0:.2f} seed={seed}: sigma_k="
                + ", ".join("sat" if s is None else f"{s:.3f}" for s in rep.sigmas)
                + "; gains=" + ", ".join("sat" if g is None else f"{g:.3f}" for g in rep.gains)
                + f" (expect {expected:.3f} +- {GAIN_BAND})")
    results = {"band": GAIN_BAND, "passed": ok}
    return Outcome(results, rows, summary, ok=ok)


COMMANDS = {
    "domains": cmd_domains,
    "minimal-n": cmd_minimal_n,
    "verify": cmd_verify,
    "paraproduct-check": cmd_paraproduct_check,
    "smoothness": cmd_smoothness,
    "smoothing-profile": cmd_smoothing_profile,
}


# ---------------------------------------------------------------- artifacts

def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def render_csv(rows):
    buf = io.StringIO()
    if not rows:
        return ""
    fields = list(rows[0].keys())
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fields)
    for r in rows:
        writer.writerow([_fmt(r.get(k)) for k in fields])
    return buf.getvalue()


def _jsonable(v):
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if math.isfinite(v) else None
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.bool_):
        return bool(v)
    return v


def render_json(config, outcome):
    doc = {"config": config, "results": outcome.results}
    if outcome.witness_path is not None:
        doc["witness_path"] = outcome.witness_path
    return json.dumps(_jsonable(doc), indent=2, sort_keys=True) + "\n"


def write_atomic(path, text):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".paracalc-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _config(args):
    cfg = {k: v for k, v in vars(args).items() if k not in ("out", "format")}
    if "seed" in cfg:
        cfg["seed"] = _seed(args)
    return {CONFIG_KEYS.get(k, k): v for k, v in sorted(cfg.items())}


def _artifact(args, outcome):
    fmt = args.format
    if fmt is None and args.out:
        ext = os.path.splitext(args.out)[1].lower().lstrip(".")
        fmt = ext if ext in ("csv", "json", "svg") else "csv"
    if fmt is None:
        return None
    if fmt == "svg":
        if outcome.svg is None:
            raise UsageError("--format svg is only available for 'domains'")
        return outcome.svg
    if fmt == "json":
        return render_json(_config(args), outcome)
    return render_csv(outcome.rows)


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        outcome = COMMANDS[args.subcommand](args)
        text = _artifact(args, outcome)
    except (UsageError, PreconditionError, ParacalcError, ValueError) as exc:
        msg = str(exc)
        if isinstance(exc, PreconditionError) and exc.inequality:
            msg += f" [violates {exc.inequality}]"
        print(f"paracalc: error: {msg}", file=sys.stderr)
        return 2

    if text is not None and args.out:
        try:
            write_atomic(args.out, text)
        except OSError as exc:
            print(f"paracalc: error: cannot write {args.out}: {exc}", file=sys.stderr)
            return 2
    elif text is not None:
        sys.stdout.write(text)
    if text is None or args.out:
        for line in outcome.summary:
            print(line)
        if not outcome.ok:
            print("verification FAILED", file=sys.stderr)
    return 0 if outcome.ok else 1


def entry():
    sys.exit(main())
