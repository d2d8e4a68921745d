"""The van der Pol oscillator, its auxiliary dual, and the coordinate charts.

The dissipative oscillator is embedded in a four-dimensional Hamiltonian
system by adjoining a sign-flipped companion equation that receives no
feedback.  This module provides the physical/canonical/rotated/amplitude-
phase charts, the Hamiltonian and its canonical flow, the explicit
fourth-order amplitude-phase vector field, and the generic covector
augmentation that turns any first-order field into a Hamiltonian pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_SQRT2 = math.sqrt(2.0)


class DegenerateAmplitudeError(ValueError):
    """A phase is requested where the corresponding amplitude vanishes."""


@dataclass(frozen=True)
class Params:
    """Oscillator parameters: linear angular frequency and nonlinearity."""

    omega: float
    eps: float

    def __post_init__(self):
        if not self.omega > 0.0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if self.eps < 0.0:
            raise ValueError(f"eps must be non-negative, got {self.eps}")


@dataclass(frozen=True)
class PhysState:
    """Positions and velocities of the oscillator and its companion."""

    x: float
    xdot: float
    y: float
    ydot: float

    def as_array(self):
        return np.array([self.x, self.xdot, self.y, self.ydot])

    @classmethod
    def from_array(cls, a):
        return cls(*map(float, a))


@dataclass(frozen=True)
class CartState:
    """Canonical coordinates and momenta (x, y, px, py)."""

    x: float
    y: float
    px: float
    py: float

    def as_array(self):
        return np.array([self.x, self.y, self.px, self.py])

    @classmethod
    def from_array(cls, a):
        return cls(*map(float, a))


@dataclass(frozen=True)
class RotatedState:
    """Canonical chart rotated by 45 degrees in the (x, y) plane."""

    X: float
    Y: float
    PX: float
    PY: float

    def as_array(self):
        return np.array([self.X, self.Y, self.PX, self.PY])

    @classmethod
    def from_array(cls, a):
        return cls(*map(float, a))


@dataclass(frozen=True)
class AlphaBeta:
    """Action-like amplitudes (alpha ~ omega^2) and phase offsets (time)."""

    alpha1: float
    alpha2: float
    beta1: float
    beta2: float

    def as_array(self):
        return np.array([self.alpha1, self.alpha2, self.beta1, self.beta2])

    @classmethod
    def from_array(cls, a):
        return cls(*map(float, a))


@dataclass(frozen=True)
class ReducedCoords:
    """Equal-amplitude chart: alpha1 with gamma1 = b1 + b2, gamma2 = b1 - b2."""

    alpha1: float
    gamma1: float
    gamma2: float


def vdp_rhs(x: float, v: float, p: Params):
    """(dx/dt, dv/dt) for the oscillator alone."""
    return v, -p.eps * (x * x - 1.0) * v - p.omega * p.omega * x


def dual_rhs(s: PhysState, p: Params) -> PhysState:
    """Time derivative of the joint state; the companion carries
    sign-flipped damping and the coupling is strictly one-way."""
    e, w2 = p.eps, p.omega * p.omega
    d = e * (s.x * s.x - 1.0)
    return PhysState(
        x=s.xdot,
        xdot=-d * s.xdot - w2 * s.x,
        y=s.ydot,
        ydot=d * s.ydot - w2 * s.y,
    )


def hamiltonian(s: CartState, p: Params) -> float:
    """Conserved generator of the joint flow: px py + w^2 x y + e (x^2-1) y py."""
    return (s.px * s.py + p.omega * p.omega * s.x * s.y
            + p.eps * (s.x * s.x - 1.0) * s.y * s.py)


def hamilton_rhs(s: CartState, p: Params) -> CartState:
    """Canonical equations of :func:`hamiltonian`."""
    e, w2 = p.eps, p.omega * p.omega
    d = e * (s.x * s.x - 1.0)
    return CartState(
        x=s.py,
        y=s.px + d * s.y,
        px=-w2 * s.y - 2.0 * e * s.x * s.y * s.py,
        py=-w2 * s.x - d * s.py,
    )


def phys_to_cart(s: PhysState, p: Params) -> CartState:
    """Legendre map: px = ydot - e (x^2-1) y, py = xdot."""
    return CartState(
        x=s.x, y=s.y,
        px=s.ydot - p.eps * (s.x * s.x - 1.0) * s.y,
        py=s.xdot,
    )


def cart_to_phys(s: CartState, p: Params) -> PhysState:
    """Inverse Legendre map, recovering the velocities."""
    return PhysState(
        x=s.x, xdot=s.py,
        y=s.y, ydot=s.px + p.eps * (s.x * s.x - 1.0) * s.y,
    )


def cart_to_rotated(s: CartState) -> RotatedState:
    """Orthogonal symplectic rotation X=(x+y)/sqrt2, Y=(x-y)/sqrt2 (same for p)."""
    return RotatedState(
        X=(s.x + s.y) / _SQRT2, Y=(s.x - s.y) / _SQRT2,
        PX=(s.px + s.py) / _SQRT2, PY=(s.px - s.py) / _SQRT2,
    )


def rotated_to_cart(s: RotatedState) -> CartState:
    """Inverse rotation (the map is an involution)."""
    return CartState(
        x=(s.X + s.Y) / _SQRT2, y=(s.X - s.Y) / _SQRT2,
        px=(s.PX + s.PY) / _SQRT2, py=(s.PX - s.PY) / _SQRT2,
    )


def rotated_hamiltonian(s: RotatedState, p: Params) -> float:
    """The generator in the rotated chart: a harmonic part PX^2/2 + w^2 X^2/2
    minus its Y-counterpart, plus the nonlinear coupling."""
    w2 = p.omega * p.omega
    h0 = 0.5 * (s.PX * s.PX + w2 * s.X * s.X) \
        - 0.5 * (s.PY * s.PY + w2 * s.Y * s.Y)
    xy = (s.X + s.Y) / _SQRT2
    return h0 + p.eps * ((s.PX - s.PY) / _SQRT2) * ((s.X - s.Y) / _SQRT2) \
        * (xy * xy - 1.0)


def rotated_to_alphabeta(s: RotatedState, t: float, p: Params) -> AlphaBeta:
    """Invert the harmonic reference motion at time t.

    alpha1 = (PX^2 + w^2 X^2)/2 and likewise for the Y pair; phases use the
    principal atan2 branch, i.e. w(t + beta1) and w(t - beta2) are returned
    in (-pi, pi].  Raises when either amplitude vanishes (phase undefined).
    """
    w = p.omega
    a1 = 0.5 * (s.PX * s.PX + w * w * s.X * s.X)
    a2 = 0.5 * (s.PY * s.PY + w * w * s.Y * s.Y)
    if a1 == 0.0 or a2 == 0.0:
        raise DegenerateAmplitudeError("zero amplitude: phase undefined")
    phi1 = math.atan2(w * s.X, s.PX)        # = w (t + beta1)
    phi2 = math.atan2(w * s.Y, -s.PY)       # = w (t - beta2)
    return AlphaBeta(alpha1=a1, alpha2=a2,
                     beta1=phi1 / w - t, beta2=t - phi2 / w)


def alphabeta_to_rotated(s: AlphaBeta, t: float, p: Params) -> RotatedState:
    """The harmonic reference motion evaluated at time t."""
    if s.alpha1 < 0.0 or s.alpha2 < 0.0:
        raise ValueError("amplitudes must be non-negative")
    w = p.omega
    r1, r2 = math.sqrt(2.0 * s.alpha1), math.sqrt(2.0 * s.alpha2)
    u1, u2 = w * (t + s.beta1), w * (t - s.beta2)
    return RotatedState(
        X=r1 / w * math.sin(u1), Y=r2 / w * math.sin(u2),
        PX=r1 * math.cos(u1), PY=-r2 * math.cos(u2),
    )


# ---------------------------------------------------------------------------
# Fourth-order amplitude-phase vector field (f1, f2, f3, f4).
#
# A handful of terms below differ from their commonly transcribed forms:
# each such line is marked "restored" and carries the unique coefficient for
# which (a) the four conjugate-pair divergence identities of a canonical
# field hold exactly and (b) the equal-amplitude reduction reproduces the
# closed-form rates of lie_series (reduced_alpha_rate / reduced_beta_rate).
# Both properties are enforced by the test suite.
# ---------------------------------------------------------------------------

def _f1(a1, a2, u, w, e):
    s12 = math.sqrt(a1 * a2)
    cu, su = math.cos(u), math.sin(u)
    c2u, c3u, c4u = math.cos(2 * u), math.cos(3 * u), math.cos(4 * u)
    w2 = w * w
    t1 = -s12 / (4 * w2) * ((a1 + a2 - 4 * w2) * cu + 2 * s12 * c2u)
    t2 = -s12 * (a1 - a2) / (64 * w2 * w2 * w) * (
        22 * s12 * cu + 11 * a1 + 11 * a2 - 24 * w2) * su
    t3 = -s12 / (2048 * w2**4) * (
        (9 * a1**3 + 54 * a1**2 * a2 - 64 * w2 * a1**2 + 54 * a1 * a2**2
         - 192 * a1 * a2 * w2 + 128 * a1 * w2 * w2 + 9 * a2**3
         - 64 * a2**2 * w2 + 128 * a2 * w2 * w2) * cu
        + 2 * s12 * (27 * a1**2 + 27 * a2**2 - 128 * a2 * w2 + 128 * w2 * w2
                     + 72 * a1 * a2 - 128 * a1 * w2) * c2u
        + 3 * a1 * a2 * (27 * a1 + 27 * a2 - 64 * w2) * c3u      # restored
        + 36 * a1 * a2 * s12 * c4u)                               # restored
    t4 = -s12 * (a1 - a2) / (98304 * w2**5 * w) * (
        2527 * a1**3 + 22743 * a1**2 * a2 + 22743 * a1 * a2**2 + 2527 * a2**3
        - 15096 * a1**2 * w2 - 60384 * a1 * a2 * w2 - 15096 * a2**2 * w2
        + 24416 * a1 * w2 * w2 + 24416 * a2 * w2 * w2 - 8448 * w2**3
        + 2 * s12 * (7581 * a1**2 + 22743 * a1 * a2 + 7581 * a2**2
                     - 30192 * a1 * w2 - 30192 * a2 * w2
                     + 24416 * w2 * w2) * cu
        + 6 * a1 * a2 * (2527 * a1 + 2527 * a2 - 5032 * w2) * c2u
        + 5054 * a1 * a2 * s12 * c3u) * su                        # restored
    return e * t1 + e**2 * t2 + e**3 * t3 + e**4 * t4


def _f2(a1, a2, u, w, e):
    s1, s2 = math.sqrt(a1), math.sqrt(a2)
    s12 = s1 * s2
    cu, su = math.cos(u), math.sin(u)
    c2u, c3u, c4u = math.cos(2 * u), math.cos(3 * u), math.cos(4 * u)
    w2 = w * w
    t1 = s2 / (8 * s1 * w2 * w) * (
        3 * a1 + a2 - 4 * w2 + 4 * s12 * cu) * su
    t2 = 1.0 / (256 * s1 * w2**3) * (
        2 * s2 * (-55 * a1**2 + 72 * a1 * w2 + 11 * a2**2 - 24 * a2 * w2) * cu
        + s1 * (-33 * a1**2 - 66 * a1 * a2 + 33 * a2**2 + 96 * a1 * w2
                - 32 * w2 * w2 - 22 * a2 * (2 * a1 - a2) * c2u))
    t3 = s2 / (4096 * s1 * w2**4 * w) * (
        63 * a1**3 + 405 * a1**2 * a2 + 243 * a1 * a2**2 + 9 * a2**3
        - 320 * a1**2 * w2 - 768 * a1 * a2 * w2 - 64 * a2**2 * w2
        + 384 * a1 * w2 * w2 + 128 * a2 * w2 * w2
        + 4 * s12 * (81 * a1**2 + 162 * a1 * a2 + 27 * a2**2 - 256 * a1 * w2
                     - 128 * a2 * w2 + 128 * w2 * w2) * cu
        + 6 * a1 * a2 * (45 * a1 + 27 * a2 - 64 * w2) * c2u
        + 72 * a1 * a2 * s12 * c3u) * su
    t4 = 1.0 / (786432 * s1 * w2**6) * (
        4 * s2 * (-22743 * a1**4 + a1**3 * (-88445 * a2 + 105672 * w2)
                  + 80 * a1**2 * (1887 * a2 * w2 - 1526 * w2 * w2)
                  + a2 * (2527 * a2**3 - 15096 * a2**2 * w2
                          + 24416 * a2 * w2 * w2 - 8448 * w2**3)
                  + 3 * a1 * (12635 * a2**3 - 30192 * a2**2 * w2
                              + 8448 * w2**3)) * cu
        + s1 * (-12635 * a1**4 - 151620 * a1**3 * a2 - 151620 * a1**2 * a2**2
                + 101080 * a1 * a2**3                             # restored
                + 37905 * a2**4 + 80512 * a1**3 * w2
                + 483072 * a1**2 * a2 * w2 - 161024 * a2**3 * w2
                - 146496 * a1**2 * w2 * w2 - 292992 * a1 * a2 * w2 * w2
                + 146496 * a2**2 * w2 * w2 + 67584 * a1 * w2**3
                - 6144 * w2**4
                + 4 * a2 * (-30324 * a1**3
                            + a1**2 * (-37905 * a2 + 90576 * w2)
                            + 14 * a1 * (1805 * a2**2 - 3488 * w2 * w2)
                            + a2 * (7581 * a2**2 - 30192 * a2 * w2
                                    + 24416 * w2 * w2)) * c2u
                + (-15162 * a1**2 * a2**2 + 10108 * a1 * a2**3) * c4u)
        - 4 * a1 * a2 * s2 * (17689 * a1**2 - 7581 * a2**2       # restored
                              - 25160 * a1 * w2 + 15096 * a2 * w2) * c3u)
    return e * t1 + e**2 * t2 + e**3 * t3 + e**4 * t4


def _f4(a1, a2, u, w, e):
    s1, s2 = math.sqrt(a1), math.sqrt(a2)
    s12 = s1 * s2
    cu, su = math.cos(u), math.sin(u)
    c2u, c3u, c4u = math.cos(2 * u), math.cos(3 * u), math.cos(4 * u)
    w2 = w * w
    t1 = s1 / (8 * s2 * w2 * w) * (
        3 * a2 + a1 - 4 * w2 + 4 * s12 * cu) * su
    t2 = 1.0 / (256 * s2 * w2**3) * (
        -2 * s1 * (-55 * a2**2 + 72 * a2 * w2 + 11 * a1**2 - 24 * a1 * w2) * cu
        + s2 * (-33 * a1**2 + 66 * a1 * a2 + 33 * a2**2 - 96 * a2 * w2
                + 32 * w2 * w2 - 22 * a1 * (a1 - 2 * a2) * c2u))
    t3 = s1 / (4096 * s2 * w2**4 * w) * (
        63 * a2**3 + 405 * a1 * a2**2 + 243 * a1**2 * a2 + 9 * a1**3
        - 320 * a2**2 * w2 - 768 * a1 * a2 * w2 - 64 * a1**2 * w2
        + 384 * a2 * w2 * w2 + 128 * a1 * w2 * w2
        + 4 * s12 * (81 * a2**2 + 162 * a1 * a2 + 27 * a1**2 - 256 * a2 * w2
                     - 128 * a1 * w2 + 128 * w2 * w2) * cu
        + 6 * a1 * a2 * (45 * a2 + 27 * a1 - 64 * w2) * c2u
        + 72 * a1 * a2 * s12 * c3u) * su
    t4 = 1.0 / (786432 * s2 * w2**6) * (
        -4 * s1 * (2527 * a1**4 + 3 * a1**3 * (12635 * a2 - 5032 * w2)
                   + a1**2 * (-90576 * a2 * w2 + 24416 * w2 * w2)
                   + a1 * (-88445 * a2**3 + 150960 * a2**2 * w2
                           - 8448 * w2**3)
                   + a2 * (-22743 * a2**3 + 105672 * a2**2 * w2
                           - 122080 * a2 * w2 * w2 + 25344 * w2**3)) * cu
        + s2 * (-37905 * a1**4 - 101080 * a1**3 * a2 + 151620 * a1**2 * a2**2
                + 151620 * a1 * a2**3 + 12635 * a2**4 + 161024 * a1**3 * w2
                - 483072 * a1 * a2**2 * w2 - 80512 * a2**3 * w2
                - 146496 * a1**2 * w2 * w2 + 292992 * a1 * a2 * w2 * w2
                + 146496 * a2**2 * w2 * w2 - 67584 * a2 * w2**3
                + 6144 * w2**4
                - 4 * a1 * (7581 * a1**3 + a1**2 * (25270 * a2 - 30192 * w2)
                            - 7 * a1 * (5415 * a2**2 - 3488 * w2 * w2)
                            - 4 * a2 * (7581 * a2**2 - 22644 * a2 * w2
                                        + 12208 * w2 * w2)) * c2u
                + (-10108 * a1**3 * a2 + 15162 * a1**2 * a2**2) * c4u)
        - 4 * a1 * a2 * s1 * (7581 * a1**2 - 17689 * a2**2      # restored
                              - 15096 * a1 * w2 + 25160 * a2 * w2) * c3u)
    return e * t1 + e**2 * t2 + e**3 * t3 + e**4 * t4


def alphabeta_rhs(s: AlphaBeta, p: Params) -> AlphaBeta:
    """Fourth-order canonical rates (f1, f2, f3, f4) of the amplitude-phase
    chart; f3 equals f1 identically, so the amplitude difference is conserved.

    The field depends on the phases only through u = (beta1 + beta2) omega.
    Raises on negative amplitudes; a vanishing amplitude is rejected too,
    since the phase rates carry inverse square-root amplitude factors.
    """
    if s.alpha1 < 0.0 or s.alpha2 < 0.0:
        raise ValueError("amplitudes must be non-negative")
    if s.alpha1 == 0.0 or s.alpha2 == 0.0:
        raise DegenerateAmplitudeError(
            "zero amplitude: phase rate undefined")
    u = (s.beta1 + s.beta2) * p.omega
    f1 = _f1(s.alpha1, s.alpha2, u, p.omega, p.eps)
    return AlphaBeta(
        alpha1=f1,
        beta1=_f2(s.alpha1, s.alpha2, u, p.omega, p.eps),
        alpha2=f1,
        beta2=_f4(s.alpha1, s.alpha2, u, p.omega, p.eps),
    )


def alphabeta_to_reduced(s: AlphaBeta, atol: float = 1e-9) -> ReducedCoords:
    """Project an equal-amplitude state onto the reduced chart."""
    if abs(s.alpha1 - s.alpha2) > atol * max(1.0, abs(s.alpha1)):
        raise ValueError("state is not on the equal-amplitude manifold")
    return ReducedCoords(alpha1=s.alpha1, gamma1=s.beta1 + s.beta2,
                         gamma2=s.beta1 - s.beta2)


def reduced_rhs(rc: ReducedCoords, p: Params) -> ReducedCoords:
    """Rates of (alpha1, gamma1, gamma2) on the equal-amplitude manifold."""
    b1 = 0.5 * (rc.gamma1 + rc.gamma2)
    b2 = 0.5 * (rc.gamma1 - rc.gamma2)
    d = alphabeta_rhs(AlphaBeta(rc.alpha1, rc.alpha1, b1, b2), p)
    return ReducedCoords(alpha1=d.alpha1, gamma1=d.beta1 + d.beta2,
                         gamma2=d.beta1 - d.beta2)


def augment(f, x, y, rel_step: float = 1e-6):
    """Covector dynamics -J(x)^T y for an arbitrary field f, with the
    Jacobian J formed by central differences (per-component step
    max(rel_step, rel_step*|x_i|)).

    The joint flow (dx/dt = f(x), dy/dt = augment(f, x, y)) conserves
    y . f(x).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = x.size
    jac = np.empty((n, n))
    for j in range(n):
        h = max(rel_step, rel_step * abs(x[j]))
        xp = x.copy(); xp[j] += h
        xm = x.copy(); xm[j] -= h
        jac[:, j] = (np.asarray(f(xp), dtype=float)
                     - np.asarray(f(xm), dtype=float)) / (2.0 * h)
    return -jac.T @ y
