"""Settle onto the frozen-parameter limit cycle and measure it.

The phase chart is r = sqrt(x^2 + (xdot/omega)^2), theta = atan2(-xdot/omega, x),
which rotates uniformly at rate omega in the weak-nonlinearity limit and keeps
theta-dot positive on the cycle for every parameter pair exercised here.  The
period comes from averaged Poincare return times; the radius and angular-
velocity tables are evaluated exactly at the angle grid nodes by root-finding
on the dense output, so the tabulation error is set by the integrator
tolerance alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline, PchipInterpolator

from .dual_dynamics import Params
from .lie_series import limit_cycle_frequency
from .ode import IntegratorConfig, Trajectory, find_crossings, integrate

TWO_PI = 2.0 * math.pi

# Poincare sections, named by the chart angle at which they cross
SECTIONS = ("theta0", "theta_pi_half", "x0_rising")


class NonConvergenceError(RuntimeError):
    """The transient did not relax onto the cycle within the period budget."""


class PositivityError(RuntimeError):
    """The tabulated angular velocity is not strictly positive."""


class ConsistencyError(RuntimeError):
    """Poincare frequency and angular-velocity normalization disagree."""


def polar_coords(x, xdot, omega):
    """Chart map (x, xdot) -> (r, theta) with theta in [0, 2 pi)."""
    r = np.hypot(x, xdot / omega)
    theta = np.arctan2(-xdot / omega, x) % TWO_PI
    return r, theta


def angular_velocity(x, xdot, p: Params):
    """theta-dot along the flow: omega + eps x (x^2 - 1) xdot / (omega r^2)."""
    r2 = x * x + (xdot / p.omega) ** 2
    return p.omega + p.eps * x * (x * x - 1.0) * xdot / (p.omega * r2)


def _section_event(section):
    if section == "theta0":          # xdot falls through 0 at x > 0
        return (lambda t, y: y[1]), "falling"
    if section == "theta_pi_half":   # x falls through 0
        return (lambda t, y: y[0]), "falling"
    if section == "x0_rising":       # x rises through 0
        return (lambda t, y: y[0]), "rising"
    raise ValueError(f"unknown section {section!r}, expected one of {SECTIONS}")


@dataclass
class LimitCycleData:
    """Measured frozen-parameter cycle with angle-gridded tables."""

    params: Params
    period: float
    frequency: float            # 2 pi / period
    amplitude: float            # max |x| on the cycle
    theta_grid: np.ndarray      # uniform on [0, 2 pi)
    R_table: np.ndarray         # radius at each grid node
    Omega_table: np.ndarray     # theta-dot at each grid node
    section_state: np.ndarray   # (x, xdot) at theta = 0
    _psi_spline: object = field(default=None, repr=False, compare=False)
    _r_interp: object = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if np.any(self.Omega_table <= 0.0):
            raise PositivityError("angular velocity table must be positive")
        f = 1.0 / self.Omega_table
        freq_norm = 1.0 / np.mean(f)
        if abs(self.frequency - freq_norm) > 1e-8 * self.frequency:
            raise ConsistencyError(
                f"Poincare frequency {self.frequency!r} vs normalization "
                f"{freq_norm!r}")

    # -- phase reparametrization ------------------------------------------
    def _build_psi(self):
        n = self.theta_grid.size
        f = 1.0 / self.Omega_table
        coef = np.fft.fft(f)
        mean = coef[0].real / n
        harmonics = np.fft.fftfreq(n, d=1.0 / n)
        h = np.zeros_like(coef)
        nz = harmonics != 0
        h[nz] = coef[nz] / (n * mean) / (1j * harmonics[nz])
        if n % 2 == 0:
            h[n // 2] = 0.0
        osc = np.real(np.fft.ifft(h * n))
        psit = osc - osc[0]
        grid = np.append(self.theta_grid, TWO_PI)
        self._psi_spline = CubicSpline(grid, np.append(psit, 0.0),
                                       bc_type="periodic")

    def psi(self, theta):
        """Uniformized phase: psi' = frequency / Omega(theta), psi(0) = 0,
        psi(theta + 2 pi) = psi(theta) + 2 pi exactly."""
        if self._psi_spline is None:
            self._build_psi()
        theta = np.asarray(theta, dtype=float)
        return theta + self._psi_spline(theta % TWO_PI)

    def radius(self, theta):
        """Monotone-cubic interpolation of R over the periodic grid."""
        if self._r_interp is None:
            n = self.theta_grid.size
            pad = 4
            idx = np.r_[np.arange(n - pad, n), np.arange(n), np.arange(pad)]
            grid = np.r_[self.theta_grid[-pad:] - TWO_PI, self.theta_grid,
                         self.theta_grid[:pad] + TWO_PI]
            self._r_interp = PchipInterpolator(grid, self.R_table[idx])
        return self._r_interp(np.asarray(theta) % TWO_PI)


def psi_of_theta(lc: LimitCycleData, theta):
    """Module-level convenience wrapper around :meth:`LimitCycleData.psi`."""
    return lc.psi(theta)


def _rhs(p: Params):
    e, w2 = p.eps, p.omega * p.omega
    def f(t, y):
        x, v = y
        return (v, -e * (x * x - 1.0) * v - w2 * x)
    return f


def settle(p: Params, n_transient: float | None = None, x0=(2.0, 0.0),
           cfg: IntegratorConfig | None = None,
           return_distance: float = 1e-9) -> np.ndarray:
    """Relax onto the limit cycle; returns the section state (x, 0) at
    theta = 0.

    Iterates the Poincare return map from ``x0`` until two successive
    section states agree to ``return_distance``, capped at
    ``n_transient`` (default max(50, 20/eps)) periods.
    """
    if p.eps <= 0.0:
        raise ValueError("settle requires eps > 0 (no cycle at eps = 0)")
    if n_transient is None:
        n_transient = max(50.0, 20.0 / p.eps)
    cfg = cfg or IntegratorConfig()
    rhs = _rhs(p)
    period_est = TWO_PI / limit_cycle_frequency(p)
    g, direction = _section_event("theta0")

    y = np.asarray(x0, dtype=float)
    prev = None
    elapsed = 0.0
    while elapsed < (n_transient + 2.0) * period_est:
        traj = integrate(rhs, y, 0.0, 1.5 * period_est, cfg)
        hits = [(t, s) for t, s in find_crossings(traj, g, direction)
                if s[0] > 0.0]
        if not hits:
            raise NonConvergenceError("no section crossing found in chunk")
        t_hit, s_hit = hits[0]
        elapsed += t_hit
        y = np.array([s_hit[0], 0.0])  # exactly on the section
        if prev is not None and abs(y[0] - prev) <= return_distance:
            return y
        prev = y[0]
    raise NonConvergenceError(
        f"return distance stayed above {return_distance} after "
        f"{n_transient} periods")


def measure(p: Params, n_theta: int = 512, cfg: IntegratorConfig | None = None,
            n_returns: int = 20, section: str = "theta0",
            settled: np.ndarray | None = None) -> LimitCycleData:
    """Measure the frozen-parameter cycle.

    Period is the mean of ``n_returns`` consecutive Poincare return
    intervals; the angle tables are evaluated at the uniform grid nodes by
    bracketing the node angles on one densely sampled period and polishing
    the crossing times on the dense output.
    """
    if n_theta < 16 or n_theta % 2:
        raise ValueError("n_theta must be an even integer >= 16")
    cfg = cfg or IntegratorConfig()
    rhs = _rhs(p)
    y0 = settled if settled is not None else settle(p, cfg=cfg)
    period_est = TWO_PI / limit_cycle_frequency(p)
    g, direction = _section_event(section)

    traj = integrate(rhs, np.asarray(y0, float), 0.0,
                     (n_returns + 1.6) * period_est, cfg)
    hits = find_crossings(traj, g, direction)
    if section != "x0_rising":
        hits = [(t, s) for t, s in hits
                if (s[0] > 0.0 if section == "theta0" else s[1] < 0.0)]
    times = np.array([t for t, _ in hits])
    if times.size < n_returns + 1:
        raise NonConvergenceError("too few section returns to average")
    period = (times[n_returns] - times[0]) / n_returns

    # one full period from the theta = 0 point for the tables
    sec = settle(p, n_transient=5.0, x0=y0, cfg=cfg)
    table_traj = integrate(rhs, sec, 0.0, 1.002 * period, cfg)
    theta_grid = TWO_PI * np.arange(n_theta) / n_theta
    r_tab, om_tab = _tabulate(table_traj, theta_grid, p, period)

    amplitude = max(r_tab[0], r_tab[n_theta // 2])
    return LimitCycleData(
        params=p, period=period, frequency=TWO_PI / period,
        amplitude=amplitude, theta_grid=theta_grid, R_table=r_tab,
        Omega_table=om_tab, section_state=sec,
    )


def _tabulate(traj: Trajectory, theta_grid, p: Params, period):
    """Locate the grid angles on the dense output by vectorized Newton
    iteration in time (theta-dot > 0 makes theta(t) invertible)."""
    ts = np.linspace(0.0, period, 8 * theta_grid.size + 1)
    states = traj(ts)
    _, th = polar_coords(states[:, 0], states[:, 1], p.omega)
    th_unwrapped = np.unwrap(th)
    if th_unwrapped[-1] < theta_grid[-1]:
        raise NonConvergenceError("angle grid not covered by the period")

    t_nodes = np.interp(theta_grid, th_unwrapped, ts)
    t_nodes[0] = 0.0
    for _ in range(4):
        st = traj(t_nodes)
        _, th_n = polar_coords(st[:, 0], st[:, 1], p.omega)
        diff = _wrap_diff(th_n, theta_grid)
        om = angular_velocity(st[:, 0], st[:, 1], p)
        t_nodes = np.clip(t_nodes - diff / om, 0.0, traj.t1)
        t_nodes[0] = 0.0
    st = traj(t_nodes)
    resid = np.abs(_wrap_diff(
        polar_coords(st[:, 0], st[:, 1], p.omega)[1], theta_grid))
    if np.max(resid[1:]) > 1e-11:
        raise NonConvergenceError("angle node location did not converge")
    r_tab = np.hypot(st[:, 0], st[:, 1] / p.omega)
    om_tab = angular_velocity(st[:, 0], st[:, 1], p)
    return r_tab, om_tab


def _wrap_diff(a, b):
    """Angle difference wrapped to (-pi, pi]."""
    return (a - b + math.pi) % TWO_PI - math.pi
