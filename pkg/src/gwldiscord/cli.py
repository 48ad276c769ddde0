"""Command line front end: ``report``, ``sweep``, ``table1`` and ``verify``.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

import argparse
import csv
import io
import json
import math
import sys
import time

import numpy as np

from . import measures, oracle
from .numkernel import herm_eigvals
from .states import (
    GWL_P_RANGE,
    apply_unitary,
    gwl,
    named_state,
    parse_state,
    random_pure_state,
    werner,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

TABLE1_STATES = (("psi1", "psi1"), ("psi2", "psi2"), ("psi3", "psi3"), ("Psi+", "bell:psi+"))


class UsageError(Exception):
    pass


def fmt(x) -> str:
    """Twelve significant digits; ``float(fmt(x))`` re-formats identically."""
    return format(float(x), ".12g")


def _round12(x):
    return float(fmt(x))


def _phases(args):
    return (args.phi1, args.phi2, args.phi3, args.phi4)


def _state(args):
    try:
        return parse_state(args.state, _phases(args), normalize=args.normalize)
    except ValueError as exc:
        raise UsageError(f"cannot parse --state: {exc}") from None


def _config(args):
    return oracle.OptimizerConfig(grid_n=args.grid, seed=args.seed)


def _check_p(p):
    lo, hi = GWL_P_RANGE
    if not (lo - 1e-15 <= p <= hi + 1e-15):
        raise UsageError(f"p={p!r} outside [-1/3, 1]")


def cmd_report(args, out):
    psi = _state(args)
    _check_p(args.p)
    numeric = None
    if args.oracle:
        numeric = oracle.discord_numeric(gwl(psi, args.p), "A->B", _config(args))
    report = measures.correlation_report(psi, args.p, numeric)
    row = {
        "p": report.p,
        "entropy_total": report.entropy_total,
        "entropy_marginal": report.entropy_marginal,
        "concurrence_pure": report.concurrence_pure,
        "concurrence_gwl": report.concurrence_gwl,
        "eof": report.eof,
        "discord_analytic": report.discord_analytic,
        "p_critical": report.p_critical,
    }
    if numeric is not None:
        row["discord_numeric"] = numeric
    if args.format == "csv":
        _write_csv(out, list(row), [row])
    else:
        out.write(json.dumps({k: _round12(v) for k, v in row.items()}, indent=2) + "\n")
    return EXIT_OK


def sweep_rows(psi, p_min, p_max, steps, with_oracle=False, cfg=None):
    cfg = cfg or oracle.OptimizerConfig()
    c = measures.pure_concurrence(psi)
    rows = []
    for p in np.linspace(p_min, p_max, steps):
        p = float(p)
        row = {
            "p": p,
            "eof": measures.eof(measures.gwl_concurrence(c, p)),
            "qd_analytic": measures.discord_analytic(c, p),
        }
        if with_oracle:
            row["qd_numeric"] = oracle.discord_numeric(gwl(psi, p), "A->B", cfg)
        row["s_ab"] = measures.gwl_entropy(p)
        row["s_a"] = measures.reduced_entropy(c, p)
        rows.append(row)
    return rows


def _write_csv(out, header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(r[k]) for k in header])
    out.write(buf.getvalue())


def cmd_sweep(args, out):
    psi = _state(args)
    if args.steps < 2:
        raise UsageError("--steps must be at least 2")
    _check_p(args.p_min)
    _check_p(args.p_max)
    if args.p_min > args.p_max:
        raise UsageError("--p-min must not exceed --p-max")
    rows = sweep_rows(psi, args.p_min, args.p_max, args.steps, args.oracle, _config(args))
    if args.format == "json":
        out.write(json.dumps([{k: _round12(v) for k, v in r.items()} for r in rows]) + "\n")
    else:
        _write_csv(out, list(rows[0]), rows)
    return EXIT_OK


def table1_rows(cfg=None):
    cfg = cfg or oracle.OptimizerConfig()
    rows = []
    for label, name in TABLE1_STATES:
        psi = named_state(name)
        rows.append({
            "state": label,
            "p_c": measures.p_critical(psi),
            "p_i": oracle.intersection_point(psi, cfg),
            "p_b": oracle.bell_threshold(psi, cfg),
        })
    return rows


def cmd_table1(args, out):
    rows = table1_rows(_config(args))

    def cell(v):
        return "none" if v is None else f"{v:.4f}"

    if args.format == "json":
        out.write(json.dumps([{k: (v if isinstance(v, str) or v is None else _round12(v))
                               for k, v in r.items()} for r in rows]) + "\n")
        return EXIT_OK
    if args.format == "csv":
        out.write("state,p_c,p_i,p_b_derived\n")
        for r in rows:
            out.write(",".join([r["state"]] + [cell(r[k]) for k in ("p_c", "p_i", "p_b")]) + "\n")
        return EXIT_OK
    out.write(f"{'state':<8}{'p_c':>10}{'p_i':>10}{'p_b (derived)':>16}\n")
    for r in rows:
        out.write(f"{r['state']:<8}{cell(r['p_c']):>10}{cell(r['p_i']):>10}{cell(r['p_b']):>16}\n")
    return EXIT_OK


VERIFY_P = (-0.3, -0.1, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99)


class _Check:
    def __init__(self, name, tol):
        self.name, self.tol = name, tol
        self.max_err = 0.0
        self.failure = None

    def record(self, err, where):
        self.max_err = max(self.max_err, err)
        if err > self.tol and self.failure is None:
            self.failure = where


def run_verify(seed=0, n_states=50, cfg=None):
    """Run the invariant checks; returns a list of finished ``_Check`` objects."""
    cfg = cfg or oracle.OptimizerConfig(seed=seed)
    rng = np.random.default_rng(seed)
    states = [random_pure_state(rng) for _ in range(n_states)]
    checks = []

    c = _Check("oracle_vs_analytic_discord", 1e-6)
    sym = _Check("discord_symmetry", 1e-8)
    for k, psi in enumerate(states):
        for p in VERIFY_P:
            rho = gwl(psi, p)
            ana = measures.discord_analytic(psi, p)
            fwd = oracle.discord_numeric(rho, "A->B", cfg)
            c.record(abs(fwd - ana), (f"random[{k}]", p))
            if p in (0.1, 0.5, 0.9):
                bwd = oracle.discord_numeric(rho, "B->A", cfg)
                sym.record(abs(fwd - bwd), (f"random[{k}]", p))
    checks += [c, sym]

    c = _Check("werner_identity", 1e-15)
    phi_minus = named_state("bell:phi-")
    for p in np.linspace(-1.0, 1.0 / 3.0, 41):
        err = float(np.max(np.abs(gwl(phi_minus, -p) - werner(p))))
        c.record(err, ("bell:phi-", float(p)))
    checks.append(c)

    c = _Check("psi6_phase_symmetry", 1e-12)
    for f in np.linspace(0.0, 2 * math.pi, 64, endpoint=False):
        d1 = measures.discord_analytic(named_state("psi6", (f, 0, 0, 0)), 0.8)
        d2 = measures.discord_analytic(named_state("psi6", (2 * math.pi - f, 0, 0, 0)), 0.8)
        c.record(abs(d1 - d2), ("psi6", float(f)))
    checks.append(c)

    spectrum = _Check("gwl_spectrum", 1e-12)
    conc = _Check("concurrence_closed_vs_wootters", 1e-10)
    restr = _Check("mixing_parameter_restriction", 1e-12)
    inv = _Check("unitary_form_invariance", 1e-12)
    for k, psi in enumerate(states[:20]):
        p = float(rng.uniform(-1.0 / 3.0, 0.95))
        rho = gwl(psi, p)
        ev = herm_eigvals(rho)
        ref = np.sort([(1 + 3 * p) / 4] + [(1 - p) / 4] * 3)[::-1]
        spectrum.record(float(np.max(np.abs(ev - ref))), (f"random[{k}]", p))
        conc.record(abs(measures.wootters_concurrence(rho) - measures.gwl_concurrence(psi, p)),
                    (f"random[{k}]", p))
        if p != 0.0:
            d = oracle.MeasurementDirection(rng.uniform(0, math.pi / 2), rng.uniform(0, 2 * math.pi))
            ens = oracle.luders_update(rho, d, "A")
            xs = [oracle.extract_mixing_parameter(ens.unmeasured_marginal(m), p) for m in (0, 1)]
            lhs, rhs = sum(x / (1 - x) for x in xs), 2 * p / (1 - p)
            # relative once the value itself exceeds 1 (x/(1-x) amplifies round-off)
            restr.record(abs(lhs - rhs) / max(1.0, abs(rhs)), (f"random[{k}]", p))
        u, _ = np.linalg.qr(rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)))
        ev = herm_eigvals(apply_unitary(rho, u))
        inv.record(float(np.max(np.abs(ev - ref))), (f"random[{k}]", p))
    checks += [spectrum, conc, restr, inv]
    return checks


def cmd_verify(args, out):
    if args.n_states < 1:
        raise UsageError("--n-states must be at least 1")
    t0 = time.time()
    checks = run_verify(args.seed, args.n_states, oracle.OptimizerConfig(grid_n=args.grid, seed=args.seed))
    status = EXIT_OK
    for c in checks:
        ok = c.failure is None
        out.write(f"{'PASS' if ok else 'FAIL'} {c.name}: max error {c.max_err:.3e} (tol {c.tol:.0e})\n")
    for c in checks:
        if c.failure is not None:
            state, p = c.failure
            out.write(f"first failure: state={state} p={p} check={c.name}\n")
            status = EXIT_FAIL
            break
    out.write(f"{'verification passed' if status == EXIT_OK else 'verification FAILED'} "
              f"in {time.time() - t0:.1f}s\n")
    return status


def _add_state_flags(sp, default_state=None):
    sp.add_argument("--state", required=default_state is None, default=default_state,
                    help="'named:<id>' or 'z1re,z1im,...,z4im'")
    sp.add_argument("--normalize", action="store_true", help="rescale raw amplitudes to unit norm")
    for k in range(1, 5):
        sp.add_argument(f"--phi{k}", type=float, default=0.0, help="psi6 phase (radians)")


def _add_oracle_flags(sp):
    sp.add_argument("--grid", type=int, default=64, help="oracle grid points per angle")
    sp.add_argument("--seed", type=int, default=0)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="gwl-discord",
        description="Discord and entanglement of formation of two-qubit Werner-like states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("report", help="correlation measures for one (state, p)")
    _add_state_flags(sp)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--oracle", action="store_true", help="also compute the numerical discord")
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    _add_oracle_flags(sp)
    sp.set_defaults(func=cmd_report)

    sp = sub.add_parser("sweep", help="EoF and discord over a range of p (CSV)")
    _add_state_flags(sp)
    sp.add_argument("--p-min", type=float, default=-1.0 / 3.0)
    sp.add_argument("--p-max", type=float, default=1.0)
    sp.add_argument("--steps", type=int, default=100)
    sp.add_argument("--oracle", action="store_true", help="add a qd_numeric column")
    sp.add_argument("--format", choices=("json", "csv"), default="csv")
    _add_oracle_flags(sp)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("table1", help="critical, crossing and CHSH thresholds of the example states")
    sp.add_argument("--format", choices=("text", "json", "csv"), default="text")
    _add_oracle_flags(sp)
    sp.set_defaults(func=cmd_table1)

    sp = sub.add_parser("verify", help="check analytic results against the numerical oracle")
    sp.add_argument("--n-states", type=int, default=50)
    _add_oracle_flags(sp)
    sp.set_defaults(func=cmd_verify)
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "grid", 64) < 8:
        parser.error("--grid must be at least 8")
    try:
        return args.func(args, out)
    except UsageError as exc:
        sys.stderr.write(f"gwl-discord: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
