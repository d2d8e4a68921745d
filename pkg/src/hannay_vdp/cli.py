"""Command-line front end: series evaluation, cycle measurement, Hannay
angles, geometric-phase sweeps, the equivalence figure, the coupled-
oscillator demonstration, and a self-test battery.

Exit codes: 0 success, 1 usage error, 2 numerical failure.  Every
literature-comparison line prints the computed value, the quoted value
their difference.  Output files carry '#'-prefixed provenance headers and
are byte-identical for identical configurations.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from ._svg import write_svg_plot
from .dual_dynamics import Params
from .geophase import (
    AdiabaticityError,
    check_adiabatic,
    frozen_grid,
    sweep,
)
from .hannay import (
    QUOTED_ELLIPSE_ANGLE,
    QUOTED_SQUARE_ANGLE,
    green_theorem_oracle,
    hannay_angle,
)
from .lie_series import limit_cycle_frequency
from .limit_cycle import NonConvergenceError, measure
from .loops import (
    InvalidLoopError,
    make_ellipse_loop,
    make_polyline_loop,
    make_square_loop,
)
from .ode import IntegrationError, IntegratorConfig
from .resonance import (
    CoupledParams,
    ResonanceError,
    compare,
    is_resonant,
    nonresonant_prediction,
)

QUOTED_SQUARE_PSI_G = 0.0103   # quoted large-T geometric phase, square loop
QUOTED_ELLIPSE_PSI_G = 0.013   # quoted large-T geometric phase, ellipse loop


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class ResultTable:
    """Rectangular numeric table with provenance metadata."""

    columns: list
    rows: list
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        for r in self.rows:
            if len(r) != len(self.columns):
                raise ValueError("ragged table row")


def format_value(v):
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def export_table(table: ResultTable, path):
    """CSV with '#' provenance header lines, 17-significant-digit floats,
    deterministic bytes for identical configurations."""
    lines = [f"# hannay-vdp {__version__}"]
    for k in sorted(table.provenance):
        lines.append(f"# {k}: {json.dumps(table.provenance[k], sort_keys=True)}")
    lines.append(",".join(table.columns))
    for row in table.rows:
        lines.append(",".join(format_value(v) for v in row))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def read_table(path):
    """Inverse of :func:`export_table` (floats where possible)."""
    columns, rows, prov = None, [], []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("#"):
                prov.append(line)
                continue
            cells = line.split(",")
            if columns is None:
                columns = cells
                continue
            parsed = []
            for c in cells:
                try:
                    parsed.append(float(c))
                except ValueError:
                    parsed.append(c)
            rows.append(parsed)
    return columns, rows, prov


def _comparison_line(name, computed, quoted):
    return (f"{name}: computed {computed:+.6f}, quoted {quoted:+.6f}, "
            f"delta {computed - quoted:+.2e}")


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------

def _add_common(p):
    p.add_argument("--config", help="JSON file with default option values")
    p.add_argument("--rel-tol", type=float, default=None)
    p.add_argument("--abs-tol", type=float, default=None)


def _add_loop_args(p):
    p.add_argument("--loop", choices=("square", "ellipse", "polyline"),
                   default=None)
    p.add_argument("--omega", default=None,
                   help="omega range 'lo:hi' for square loops")
    p.add_argument("--eps", default=None,
                   help="eps range 'lo:hi' for square loops")
    p.add_argument("--center", default=None,
                   help="ellipse center 'omega,eps'")
    p.add_argument("--semi", default=None,
                   help="ellipse semi-axes 'a_omega,a_eps'")
    p.add_argument("--phase", type=float, default=None,
                   help="ellipse starting phase (radians)")
    p.add_argument("--vertices", default=None,
                   help="polyline vertices 'w,e;w,e;...'")


class _Options:
    """Layered option lookup: explicit flag > config file > default."""

    def __init__(self, ns):
        self._ns = ns
        self._cfg = {}
        if getattr(ns, "config", None):
            with open(ns.config, encoding="utf-8") as fh:
                self._cfg = json.load(fh)

    def get(self, name, default=None):
        v = getattr(self._ns, name.replace("-", "_"), None)
        if v is not None:
            return v
        if name in self._cfg:
            return self._cfg[name]
        return default

    def config_echo(self, keys):
        return {k: self.get(k) for k in keys if self.get(k) is not None}


def _integrator(opt: _Options) -> IntegratorConfig:
    return IntegratorConfig(rel_tol=float(opt.get("rel-tol", 1e-10)),
                            abs_tol=float(opt.get("abs-tol", 1e-10)))


def _parse_range(text, name):
    try:
        lo, hi = (float(x) for x in text.split(":"))
    except Exception as exc:
        raise UsageError(f"--{name} expects 'lo:hi', got {text!r}") from exc
    return lo, hi


def _parse_pair(text, name):
    try:
        a, b = (float(x) for x in text.split(","))
    except Exception as exc:
        raise UsageError(f"--{name} expects 'a,b', got {text!r}") from exc
    return a, b


def _build_loop(opt: _Options):
    kind = opt.get("loop", "square")
    if kind == "square":
        w = opt.get("omega", "0.6:0.8")
        e = opt.get("eps", "0.1:0.3")
        wlo, whi = _parse_range(w, "omega") if isinstance(w, str) else w
        elo, ehi = _parse_range(e, "eps") if isinstance(e, str) else e
        return make_square_loop(wlo, whi, elo, ehi)
    if kind == "ellipse":
        c = opt.get("center", "0.8,0.1")
        a = opt.get("semi", "0.2,0.1")
        w0, e0 = _parse_pair(c, "center") if isinstance(c, str) else c
        aw, ae = _parse_pair(a, "semi") if isinstance(a, str) else a
        return make_ellipse_loop(w0, e0, aw, ae,
                                 phase=float(opt.get("phase", 0.0)))
    if kind == "polyline":
        text = opt.get("vertices")
        if not text:
            raise UsageError("--vertices required for polyline loops")
        verts = [_parse_pair(v, "vertices") for v in text.split(";") if v]
        return make_polyline_loop(verts)
    raise UsageError(f"unknown loop kind {kind!r}")


def _quoted_psi(loop):
    if loop.kind == "square" and loop.meta.get("omega_min") == 0.6 \
            and loop.meta.get("eps_max") == 0.3:
        return QUOTED_SQUARE_PSI_G
    if loop.kind == "ellipse" and loop.meta.get("omega0") == 0.8:
        return QUOTED_ELLIPSE_PSI_G
    return None


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_freq(ns):
    opt = _Options(ns)
    p = Params(float(opt.get("omega", 1.0)), float(opt.get("eps", 0.3)))
    order = int(opt.get("order", 4))
    series = limit_cycle_frequency(p, order=order)
    print(f"series frequency (order {order}): {series:.10f}")
    if opt.get("measure"):
        lc = measure(p, cfg=_integrator(opt))
        print(f"measured frequency: {lc.frequency:.10f}")
        print(f"measured - series: {lc.frequency - series:+.3e}")
    return 0


def cmd_cycle(ns):
    opt = _Options(ns)
    p = Params(float(opt.get("omega", 1.0)), float(opt.get("eps", 0.3)))
    n_theta = int(opt.get("n-theta", 512))
    lc = measure(p, n_theta=n_theta, cfg=_integrator(opt))
    print(f"period: {lc.period:.12f}")
    print(f"frequency: {lc.frequency:.12f}")
    print(f"amplitude: {lc.amplitude:.12f}")
    path = opt.get("csv")
    if path:
        psi = lc.psi(lc.theta_grid)
        table = ResultTable(
            columns=["theta", "R", "Omega", "psi"],
            rows=[[float(t), float(r), float(o), float(s)]
                  for t, r, o, s in zip(lc.theta_grid, lc.R_table,
                                        lc.Omega_table, psi)],
            provenance={"command": "cycle", "omega": p.omega, "eps": p.eps,
                        "n_theta": n_theta,
                        "rel_tol": _integrator(opt).rel_tol,
                        "abs_tol": _integrator(opt).abs_tol},
        )
        export_table(table, path)
        print(f"wrote {path}")
    return 0


def cmd_hannay(ns):
    opt = _Options(ns)
    loop = _build_loop(opt)
    res = hannay_angle(loop)
    green = green_theorem_oracle(loop)
    print(f"line quadrature: {res.phi_H:.8f} "
          f"(error estimate {res.error_estimate:.1e})")
    if res.closed_form is not None:
        print(f"closed form: {res.closed_form:.8f}")
    print(f"green-theorem oracle: {green:.8f}")
    if loop.kind == "square":
        print(_comparison_line("quoted square Hannay angle", res.phi_H,
                               QUOTED_SQUARE_ANGLE))
    if loop.kind == "ellipse":
        print(_comparison_line("quoted ellipse Hannay angle", res.phi_H,
                               QUOTED_ELLIPSE_ANGLE))
        if abs(res.phi_H - QUOTED_ELLIPSE_ANGLE) > 1e-3:
            print("note: the connection's own loop integral disagrees with "
                  "the quoted 0.0147; the quadrature value is used for "
                  "equivalence tests (see README)")
    return 0


def cmd_geophase(ns):
    opt = _Options(ns)
    loop = _build_loop(opt)
    cfg = _integrator(opt)
    n_s = int(opt.get("n-s", 64))
    cycles = [float(c) for c in str(opt.get("T-cycles", "500")).split(",")]
    w0 = loop(0.0)[0]
    t_list = [c * 2.0 * math.pi / w0 for c in cycles]
    for T in t_list:
        check_adiabatic(loop, T)
    grid = frozen_grid(loop, n_s=n_s, cfg=cfg)
    phi_h = hannay_angle(loop).phi_H
    rows = []
    for c, T in zip(cycles, t_list):
        res = sweep(loop, T, cfg=cfg, grid=grid)
        print(f"T = {c:g} cycles: total {res.total_phase:.6f}, dynamic "
              f"{res.dynamic_phase:.6f}, geometric {res.geometric_phase:+.6f}"
              f" (winding {res.winding_number}, max cycle deviation "
              f"{res.max_cycle_deviation:.2e})")
        print(_comparison_line("  |psi_G| vs quadrature phi_H",
                               abs(res.geometric_phase), phi_h))
        rows.append([c, res.T, res.total_phase, res.dynamic_phase,
                     res.geometric_phase, phi_h])
    quote = _quoted_psi(loop)
    if quote is not None and rows:
        print(_comparison_line("quoted large-T |psi_G|",
                               abs(rows[-1][4]), quote))
    path = opt.get("csv")
    if path:
        table = ResultTable(
            columns=["T_cycles", "T", "total_phase", "dynamic_phase",
                     "geometric_phase", "hannay_quadrature"],
            rows=rows,
            provenance={"command": "geophase", "loop": loop.kind,
                        "n_s": n_s, "rel_tol": cfg.rel_tol,
                        "abs_tol": cfg.abs_tol,
                        "T_cycles": cycles},
        )
        export_table(table, path)
        print(f"wrote {path}")
    return 0


def cmd_fig1(ns):
    opt = _Options(ns)
    loop = _build_loop(opt)
    cfg = _integrator(opt)
    n_s = int(opt.get("n-s", 64))
    cycles = [float(c)
              for c in str(opt.get("T-cycles", "50,100,200,500,1000")).split(",")
              if c]
    if not cycles:
        raise UsageError("empty T list")
    w0 = loop(0.0)[0]
    grid = frozen_grid(loop, n_s=n_s, cfg=cfg)
    phi_h = hannay_angle(loop).phi_H
    rows = []
    for c in sorted(cycles):
        T = c * 2.0 * math.pi / w0
        try:
            res = sweep(loop, T, cfg=cfg, grid=grid)
            rows.append([c, res.geometric_phase, abs(res.geometric_phase),
                         phi_h, "ok"])
        except (AdiabaticityError, IntegrationError,
                NonConvergenceError) as exc:
            rows.append([c, float("nan"), float("nan"), phi_h,
                         f"failed: {exc}"])
    table = ResultTable(
        columns=["T_cycles", "psi_G", "abs_psi_G", "hannay_quadrature",
                 "status"],
        rows=rows,
        provenance={"command": "fig1", "loop": loop.kind, "n_s": n_s,
                    "rel_tol": cfg.rel_tol, "abs_tol": cfg.abs_tol,
                    "T_cycles": sorted(cycles)},
    )
    for row in rows:
        print(" | ".join(format_value(v) for v in row))
    quote = _quoted_psi(loop)
    good = [r for r in rows if r[4] == "ok"]
    if quote is not None and good:
        print(_comparison_line("quoted large-T |psi_G|", good[-1][2], quote))
        print(_comparison_line("quadrature phi_H vs last |psi_G|",
                               good[-1][2], phi_h))
    path = opt.get("csv")
    if path:
        export_table(table, path)
        print(f"wrote {path}")
    svg = opt.get("svg")
    if svg and good:
        write_svg_plot(
            svg,
            [([r[0] for r in good], [r[2] for r in good], "|psi_G| measured")],
            xlabel="T omega(0) / 2 pi", ylabel="|psi_G| (rad)",
            title=f"Adiabatic geometric phase vs sweep duration "
                  f"({loop.kind} loop)",
            hlines=[(phi_h, "connection loop integral")], xlog=True)
        print(f"wrote {svg}")
    return 0


def cmd_resonance(ns):
    opt = _Options(ns)
    cp = CoupledParams(float(opt.get("omega1", 1.0)),
                       float(opt.get("omega2", 1.0)),
                       float(opt.get("eps", 0.05)),
                       quadratic_frequency=bool(opt.get(
                           "quadratic_frequency", False)))
    horizon = float(opt.get("horizon", 1.0 / cp.eps if cp.eps > 0 else 20.0))
    a1, a2 = 1.0, 0.5
    print(f"omega1={cp.omega1} omega2={cp.omega2} eps={cp.eps} "
          f"quadratic_frequency={cp.quadratic_frequency}")
    if cp.eps > 0 and not is_resonant(cp, a1, a2):
        b1d, b2d = nonresonant_prediction(a1, a2, cp)
        print(f"non-resonant secular drift prediction: "
              f"beta1-dot {b1d:.6f}, beta2-dot {b2d:.6f}")
    else:
        print("inside the resonance zone: no closed-form secular "
              "prediction; beat term kept in the averaged flow")
    rep = compare(cp, horizon, y0=(a1, a2, 0.0, 0.0), cfg=_integrator(opt))
    print(f"horizon {horizon:g}: sup |alpha_full - alpha_avg| = "
          f"{rep.sup_alpha_dev:.4e}")
    print(f"             sup phase deviation = {rep.sup_phase_dev:.4e}")
    return 0


def cmd_selftest(ns):
    checks = []

    def check(name, fn):
        try:
            fn()
            checks.append((name, True, ""))
            print(f"PASS {name}")
        except Exception as exc:  # report and continue
            checks.append((name, False, str(exc)))
            print(f"FAIL {name}: {exc}")

    from .dual_dynamics import (AlphaBeta, CartState, PhysState,
                                alphabeta_rhs, alphabeta_to_rotated,
                                cart_to_phys, cart_to_rotated, phys_to_cart,
                                rotated_to_alphabeta, rotated_to_cart)
    from .lie_series import reduced_alpha_rate, reduced_beta_rate
    from .loops import reference_square_loop
    from .ode import integrate

    rng = np.random.default_rng(2026)

    def chart_round_trips():
        for _ in range(50):
            p = Params(float(rng.uniform(0.6, 1.4)),
                       float(rng.uniform(0, 0.5)))
            s = PhysState(*rng.uniform(0.3, 1.8, size=4))
            t = float(rng.uniform(0, 5))
            ab = rotated_to_alphabeta(cart_to_rotated(phys_to_cart(s, p)),
                                      t, p)
            back = cart_to_phys(rotated_to_cart(
                alphabeta_to_rotated(ab, t, p)), p)
            if not np.allclose(back.as_array(), s.as_array(), rtol=1e-11,
                               atol=1e-11):
                raise AssertionError("chart chain round trip failed")

    def manifold_reduction():
        for _ in range(50):
            p = Params(float(rng.uniform(0.6, 1.4)),
                       float(rng.uniform(0, 0.5)))
            a = float(rng.uniform(0.1, 2.0))
            b = float(rng.uniform(-3, 3))
            d = alphabeta_rhs(AlphaBeta(a, a, b, -b), p)
            if abs(d.alpha1 - reduced_alpha_rate(a, p)) > 1e-12 \
                    or abs(d.beta1 - reduced_beta_rate(a, p)) > 1e-12:
                raise AssertionError("manifold reduction mismatch")

    def hamiltonian_drift():
        from .dual_dynamics import hamilton_rhs, hamiltonian
        p = Params(1.0, 0.0)
        s0 = CartState(1.3, 0.4, -0.2, 0.8)
        cfg = IntegratorConfig(rel_tol=1e-12, abs_tol=1e-12)
        traj = integrate(
            lambda t, y: hamilton_rhs(CartState.from_array(y), p).as_array(),
            s0.as_array(), 0.0, 20.0 * 2.0 * math.pi, cfg)
        h = np.array([hamiltonian(CartState.from_array(y), p)
                      for y in traj.states])
        if np.max(np.abs(h - h[0])) > 1e-9:
            raise AssertionError("hamiltonian drift too large")

    def hannay_square():
        res = hannay_angle(reference_square_loop())
        if abs(res.phi_H - res.closed_form) > 1e-8:
            raise AssertionError("square quadrature vs closed form")

    def harmonic_period():
        traj = integrate(lambda t, y: (y[1], -y[0]), [1.0, 0.0], 0.0,
                         2.0 * math.pi)
        if not np.allclose(traj.states[-1], [1.0, 0.0], atol=1e-8):
            raise AssertionError("harmonic oscillator period")

    check("chart-round-trips", chart_round_trips)
    check("manifold-reduction", manifold_reduction)
    check("hamiltonian-conservation", hamiltonian_drift)
    check("hannay-square-self-test", hannay_square)
    check("ode-harmonic-period", harmonic_period)
    failed = [c for c in checks if not c[1]]
    print(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    return 2 if failed else 0


# ---------------------------------------------------------------------------

def build_parser():
    parser = _Parser(prog="hannay-vdp",
                     description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version",
                        version=f"hannay-vdp {__version__}")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("freq", help="limit-cycle frequency series")
    _add_common(p)
    p.add_argument("--omega", type=float, default=None)
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--order", type=int, default=None, choices=(1, 2, 3, 4))
    p.add_argument("--measure", action="store_true", default=None)
    p.set_defaults(fn=cmd_freq)

    p = sub.add_parser("cycle", help="measure the frozen limit cycle")
    _add_common(p)
    p.add_argument("--omega", type=float, default=None)
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--n-theta", type=int, default=None)
    p.add_argument("--csv", default=None)
    p.set_defaults(fn=cmd_cycle)

    p = sub.add_parser("hannay", help="loop integral of the connection")
    _add_common(p)
    _add_loop_args(p)
    p.set_defaults(fn=cmd_hannay)

    p = sub.add_parser("geophase", help="adiabatic sweep geometric phase")
    _add_common(p)
    _add_loop_args(p)
    p.add_argument("--T-cycles", default=None)
    p.add_argument("--n-s", type=int, default=None)
    p.add_argument("--csv", default=None)
    p.set_defaults(fn=cmd_geophase)

    p = sub.add_parser("fig1", help="geometric phase vs sweep duration")
    _add_common(p)
    _add_loop_args(p)
    p.add_argument("--T-cycles", default=None)
    p.add_argument("--n-s", type=int, default=None)
    p.add_argument("--csv", default=None)
    p.add_argument("--svg", default=None)
    p.set_defaults(fn=cmd_fig1)

    p = sub.add_parser("resonance", help="coupled-oscillator averaging demo")
    _add_common(p)
    p.add_argument("--omega1", type=float, default=None)
    p.add_argument("--omega2", type=float, default=None)
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--horizon", type=float, default=None)
    p.add_argument("--quadratic-frequency", action="store_true",
                   default=None)
    p.set_defaults(fn=cmd_resonance)

    p = sub.add_parser("selftest", help="run the invariant battery")
    _add_common(p)
    p.set_defaults(fn=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        if not getattr(ns, "command", None):
            parser.print_usage(sys.stderr)
            return 1
        return ns.fn(ns)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 1
    except (InvalidLoopError, json.JSONDecodeError, FileNotFoundError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (IntegrationError, NonConvergenceError, AdiabaticityError,
            ResonanceError, ValueError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
