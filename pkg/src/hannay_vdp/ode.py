"""Adaptive ODE integration and event location shared by all simulation code.

One integrator family is used everywhere: the Dormand-Prince embedded
Runge-Kutta 4(5) pair (scipy's ``RK45``) with dense output.  Event times are
located on the dense output by bracketing plus Brent root refinement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq


class IntegrationError(RuntimeError):
    """Integration failed to reach the requested end time."""


class StepUnderflowError(IntegrationError):
    """The controller demanded a step below the resolvable spacing."""


class NonFiniteStateError(IntegrationError):
    """A state or right-hand side evaluated to NaN/inf."""


@dataclass(frozen=True)
class IntegratorConfig:
    """Tolerances and step limits for :func:`integrate`.

    rel_tol, abs_tol must lie in (0, 1e-1]; defaults are 1e-10.
    """

    rel_tol: float = 1e-10
    abs_tol: float = 1e-10
    max_step: float = math.inf
    initial_step: float | None = None

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol"):
            v = getattr(self, name)
            if not (0.0 < v <= 1e-1):
                raise ValueError(f"{name} must be in (0, 1e-1], got {v}")
        if self.max_step <= 0.0:
            raise ValueError("max_step must be positive")
        if self.initial_step is not None and self.initial_step <= 0.0:
            raise ValueError("initial_step must be positive")


@dataclass
class Trajectory:
    """Integration result with strictly increasing times and dense output."""

    times: np.ndarray
    states: np.ndarray          # shape (len(times), dim)
    dense: object = field(repr=False)

    def __call__(self, t):
        """Evaluate the dense-output interpolant; accepts scalars or arrays."""
        out = self.dense(t)
        return np.asarray(out).T  # (dim,) for scalar t, (m, dim) for arrays

    @property
    def t0(self):
        return float(self.times[0])

    @property
    def t1(self):
        return float(self.times[-1])


def integrate(rhs, y0, t0, t1, cfg: IntegratorConfig | None = None) -> Trajectory:
    """Integrate ``dy/dt = rhs(t, y)`` from t0 to t1 with the RK45 pair.

    Local error per step is held below the configured tolerances and the
    pair's quartic interpolant provides dense output for event location.
    Identical inputs produce bit-identical trajectories.
    """
    cfg = cfg or IntegratorConfig()
    if not t1 > t0:
        raise ValueError(f"require t1 > t0, got [{t0}, {t1}]")
    y0 = np.asarray(y0, dtype=float)
    if not np.all(np.isfinite(y0)):
        raise NonFiniteStateError("initial state is not finite")
    f0 = np.asarray(rhs(t0, y0), dtype=float)
    if not np.all(np.isfinite(f0)):
        raise NonFiniteStateError("rhs is not finite at the initial state")

    sol = solve_ivp(
        rhs, (t0, t1), y0, method="RK45",
        rtol=cfg.rel_tol, atol=cfg.abs_tol,
        max_step=cfg.max_step, first_step=cfg.initial_step,
        dense_output=True,
    )
    if not sol.success:
        msg = sol.message or "integration failed"
        if "step size" in msg.lower():
            raise StepUnderflowError(msg)
        raise IntegrationError(msg)
    if not np.all(np.isfinite(sol.y)):
        raise NonFiniteStateError("integration produced non-finite states")
    return Trajectory(times=sol.t, states=sol.y.T, dense=sol.sol)


def find_crossings(traj: Trajectory, g, direction: str = "any",
                   samples_per_step: int = 4):
    """Locate zero crossings of ``g(t, y)`` along a trajectory.

    Each solver step is subsampled, sign changes are bracketed and refined
    with Brent's method on the dense output (time accuracy <= 1e-12).
    Crossings exactly at the initial time are excluded.  Returns a list of
    ``(time, state)`` pairs; an empty list when g never changes sign.
    """
    if direction not in ("rising", "falling", "any"):
        raise ValueError(f"unknown direction {direction!r}")

    ts = []
    t = traj.times
    for i in range(len(t) - 1):
        ts.append(np.linspace(t[i], t[i + 1], samples_per_step + 1)[:-1])
    ts = np.append(np.concatenate(ts), t[-1]) if ts else t
    gv = np.array([g(tv, traj(tv)) for tv in ts], dtype=float)

    def h(tv):
        return g(tv, traj(tv))

    out = []
    for i in range(len(ts) - 1):
        a, b = gv[i], gv[i + 1]
        if a == 0.0:
            if ts[i] == traj.t0:
                continue
            rising = gv[i - 1] < 0.0 if i > 0 else b > 0.0
            if direction == "any" or (direction == "rising") == rising:
                out.append((float(ts[i]), traj(ts[i])))
            continue
        if a * b < 0.0:
            root = brentq(h, ts[i], ts[i + 1], xtol=1e-13, rtol=8.9e-16)
            rising = a < 0.0
            if direction == "any" or (direction == "rising") == rising:
                out.append((float(root), traj(root)))
    return out
