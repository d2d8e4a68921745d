"""Measured geometric phase of the limit-cycle angle under adiabatic
parameter sweeps.

A sweep integrates the oscillator while the parameters traverse a closed
loop over a long duration T, accumulates the uniformized phase along the
actual trajectory, and subtracts the dynamic phase built from measured
frozen-parameter frequencies interpolated along the loop.  The remainder
converges, as T grows, to minus the loop integral of the adiabatic
connection, and flips sign with the loop orientation.

Sign convention: with the chart phase increasing along the motion and
total = dynamic + geometric, a counter-clockwise loop in the
(omega, eps) plane yields a *negative* geometric phase whose magnitude
matches the connection's loop integral (+0.0104 for the reference
square).  Literature values for these loops are quoted as positive;
comparisons against them are made in magnitude (see README).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import partial

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import CubicSpline

from ._parallel import parallel_map
from .dual_dynamics import Params
from .limit_cycle import LimitCycleData, measure, polar_coords
from .loops import ParamLoop, loop_from_spec
from .ode import IntegratorConfig, integrate

TWO_PI = 2.0 * math.pi

# sweeps below this many periods of the slowest frozen oscillation are
# refused rather than reported
ADIABATIC_CYCLES = 50.0


class AdiabaticityError(ValueError):
    """Sweep duration too short for the adiabatic phase to be meaningful."""


@dataclass(frozen=True)
class PhaseResult:
    """Phase bookkeeping for one sweep: total = dynamic + geometric."""

    total_phase: float
    dynamic_phase: float
    geometric_phase: float
    T: float
    winding_number: int
    max_cycle_deviation: float


def _grid_nodes(loop: ParamLoop, n_s: int) -> np.ndarray:
    """Node parameters in [0, 1): uniform for smooth loops, per-edge
    uniform (corners included) for loops with breakpoints."""
    if not loop.breakpoints:
        return np.arange(n_s) / n_s
    bounds = [0.0, *loop.breakpoints, 1.0]
    nodes = []
    for a, b in zip(bounds, bounds[1:]):
        m = max(4, round(n_s * (b - a)))
        nodes.extend(a + (b - a) * np.arange(m) / m)
    return np.asarray(nodes)


def _measure_node(args):
    omega, eps, n_theta, cfg = args
    if eps < 1e-9:
        return _harmonic_limit_cycle(omega, n_theta)
    return measure(Params(omega, eps), n_theta=n_theta, cfg=cfg)


def _harmonic_limit_cycle(omega, n_theta):
    """Weak-nonlinearity limit of the cycle data: the circle of radius 2
    traversed at uniform rate omega.  Used when a loop touches eps = 0,
    where no settling is possible but all tabulated quantities have
    well-defined limits."""
    grid = TWO_PI * np.arange(n_theta) / n_theta
    return LimitCycleData(
        params=Params(omega, 0.0), period=TWO_PI / omega, frequency=omega,
        amplitude=2.0, theta_grid=grid, R_table=np.full(n_theta, 2.0),
        Omega_table=np.full(n_theta, omega),
        section_state=np.array([2.0, 0.0]),
    )


@dataclass
class FrozenGrid:
    """Frozen-parameter cycle measurements along a loop, with cubic
    interpolation in the loop parameter (periodic for smooth loops,
    per-edge for kinked ones).  Holds only arrays and breakpoints, so it
    can be shared with worker processes."""

    breakpoints: tuple
    s_nodes: np.ndarray
    cycles: list
    _freq: object = field(default=None, repr=False)
    _radius: object = field(default=None, repr=False)

    def __post_init__(self):
        freqs = np.array([c.frequency for c in self.cycles])
        self._freq = _SInterp(self.breakpoints, self.s_nodes, freqs)

    @property
    def start_cycle(self) -> LimitCycleData:
        return self.cycles[0]

    def frequency(self, s):
        return self._freq(s)

    def loop_mean_frequency(self) -> float:
        """integral_0^1 of the interpolated frozen frequency."""
        pts = [0.0, *self.breakpoints, 1.0]
        total = 0.0
        for a, b in zip(pts, pts[1:]):
            v, _ = quad(self._freq, a, b, epsabs=1e-13, epsrel=1e-13,
                        limit=200)
            total += v
        return total

    def radius(self, theta, s):
        """Frozen-cycle radius R(theta; lambda(s)), cubic in s and
        piecewise-linear in theta (diagnostics)."""
        if self._radius is None:
            tables = np.array([c.R_table for c in self.cycles])
            self._radius = _SInterp(self.breakpoints, self.s_nodes, tables)
        grid = self.cycles[0].theta_grid
        tab = self._radius(s)          # (..., n_theta)
        theta = np.asarray(theta) % TWO_PI
        n = grid.size
        pos = theta / (TWO_PI / n)
        i = np.minimum(pos.astype(int), n - 1)
        frac = pos - i
        ip = (i + 1) % n
        if tab.ndim == 1:
            return (1.0 - frac) * tab[i] + frac * tab[ip]
        rows = np.arange(tab.shape[0])
        return (1.0 - frac) * tab[rows, i] + frac * tab[rows, ip]


class _SInterp:
    """Cubic interpolation of node data over the loop parameter."""

    def __init__(self, breakpoints, s_nodes, values):
        values = np.asarray(values)
        if not breakpoints:
            x = np.append(s_nodes, 1.0)
            y = np.concatenate([values, values[:1]], axis=0)
            self._pieces = [(0.0, 1.0, CubicSpline(x, y, axis=0,
                                                   bc_type="periodic"))]
        else:
            bounds = [0.0, *breakpoints, 1.0]
            self._pieces = []
            for a, b in zip(bounds, bounds[1:]):
                sel = (s_nodes >= a - 1e-12) & (s_nodes < b - 1e-12)
                x = np.append(s_nodes[sel], b)
                nxt = np.searchsorted(s_nodes, b % 1.0)
                end = values[nxt % len(s_nodes)]
                y = np.concatenate([values[sel], end[None, ...]
                                    if values.ndim > 1 else [end]], axis=0)
                self._pieces.append((a, b, CubicSpline(x, y, axis=0)))

    def __call__(self, s):
        s = np.asarray(s, dtype=float) % 1.0
        if len(self._pieces) == 1:
            return self._pieces[0][2](s)
        out = None
        for a, b, spl in self._pieces:
            mask = (s >= a) & (s < b) if b < 1.0 else (s >= a)
            if not np.any(mask):
                continue
            vals = spl(s[mask] if s.ndim else s)
            if s.ndim == 0:
                return vals
            if out is None:
                out = np.empty(s.shape + vals.shape[1:], dtype=float)
            out[mask] = vals
        return out


def frozen_grid(loop: ParamLoop, n_s: int = 64, n_theta: int = 512,
                cfg: IntegratorConfig | None = None,
                workers=None) -> FrozenGrid:
    """Measure the frozen cycle at n_s loop samples (in parallel when
    multiple workers are available)."""
    cfg = cfg or IntegratorConfig()
    s_nodes = _grid_nodes(loop, n_s)
    jobs = [(float(loop(float(s))[0]), float(loop(float(s))[1]), n_theta, cfg)
            for s in s_nodes]
    cycles = parallel_map(_measure_node, jobs, workers=workers)
    return FrozenGrid(breakpoints=tuple(loop.breakpoints), s_nodes=s_nodes,
                      cycles=cycles)


def check_adiabatic(loop: ParamLoop, T: float):
    w_min = loop.omega_range()[0]
    t_min = ADIABATIC_CYCLES * TWO_PI / w_min
    if T < t_min * (1.0 - 1e-12):
        raise AdiabaticityError(
            f"sweep duration {T:.3g} is below the adiabatic guard "
            f"{t_min:.3g} (= {ADIABATIC_CYCLES:g} cycles of the slowest "
            "frozen oscillation)")


def sweep(loop: ParamLoop, T: float, cfg: IntegratorConfig | None = None,
          grid: FrozenGrid | None = None, n_s: int = 64,
          workers=None) -> PhaseResult:
    """Measure total, dynamic and geometric phase for one adiabatic sweep.

    The sweep starts at theta = 0 on the frozen cycle at lambda(0), follows
    the oscillator with lambda(t) = loop(t / T), and reads the accumulated
    uniformized phase off the frozen chart at the (closed) endpoint.
    """
    check_adiabatic(loop, T)
    cfg = cfg or IntegratorConfig()
    if grid is None:
        grid = frozen_grid(loop, n_s=n_s, cfg=cfg, workers=workers)
    lc0 = grid.start_cycle
    y0 = lc0.section_state.copy()

    loop_fun = loop.fun

    def rhs(t, y):
        w, e = loop_fun(t / T)
        x, v = y
        return (v, -e * (x * x - 1.0) * v - w * w * x)

    traj = integrate(rhs, y0, 0.0, T, cfg)

    windings_est = grid.loop_mean_frequency() * T / TWO_PI
    m = int(max(4096, 12 * windings_est)) + 1
    ts = np.linspace(0.0, T, m)
    ss = ts / T
    states = traj(ts)
    lam = np.array([loop_fun(float(s)) for s in ss])
    omegas = lam[:, 0]
    r, th = polar_coords(states[:, 0], states[:, 1], omegas)
    th_u = np.unwrap(th)

    total = float(lc0.psi(th_u[-1]) - lc0.psi(th_u[0]))
    dynamic = float(T * grid.loop_mean_frequency())
    winding = int(math.floor(th_u[-1] / TWO_PI))
    deviation = float(np.max(np.abs(r - grid.radius(th, ss))))
    return PhaseResult(
        total_phase=total, dynamic_phase=dynamic,
        geometric_phase=total - dynamic, T=T,
        winding_number=winding, max_cycle_deviation=deviation,
    )


def _sweep_job(args):
    loop_spec, T, cfg, grid = args
    return sweep(loop_from_spec(*loop_spec), T, cfg=cfg, grid=grid)


def convergence_study(loop: ParamLoop, T_list, cfg: IntegratorConfig | None = None,
                      grid: FrozenGrid | None = None, n_s: int = 64,
                      workers=None):
    """One sweep per duration; returns PhaseResults sorted by T.

    All durations must pass the adiabatic guard.
    """
    T_list = sorted(float(t) for t in T_list)
    if not T_list:
        raise ValueError("T_list must not be empty")
    for T in T_list:
        check_adiabatic(loop, T)
    if grid is None:
        grid = frozen_grid(loop, n_s=n_s, cfg=cfg, workers=workers)
    cfg = cfg or IntegratorConfig()
    spec = loop.spec()
    if spec is not None:
        jobs = [(spec, T, cfg, grid) for T in T_list]
        return parallel_map(_sweep_job, jobs, workers=workers)
    return [sweep(loop, T, cfg=cfg, grid=grid) for T in T_list]
