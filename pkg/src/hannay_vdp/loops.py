"""Closed parameter loops lambda(s) = (omega(s), eps(s)) for s in [0, 1].

Orientation is implied by increasing s.  Square and polyline loops carry
their corner locations as breakpoints so that quadrature and interpolation
can respect the kinks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


class InvalidLoopError(ValueError):
    """Loop geometry violates closure or parameter-domain constraints."""


@dataclass
class ParamLoop:
    """Closed curve in (omega, eps) parameter space."""

    kind: str                   # square | ellipse | polyline | parametric
    fun: callable = field(repr=False)
    dfun: callable = field(repr=False)
    breakpoints: tuple = ()
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        w0, e0 = self.fun(0.0)
        w1, e1 = self.fun(1.0)
        if math.hypot(w1 - w0, e1 - e0) > 1e-12:
            raise InvalidLoopError("loop endpoints do not close")
        ss = np.linspace(0.0, 1.0, 1025)
        ws, es = np.array([self.fun(float(s)) for s in ss]).T
        if np.min(ws) <= 0.0:
            raise InvalidLoopError("omega must stay positive along the loop")
        if np.min(es) < 0.0:
            raise InvalidLoopError("eps must stay non-negative along the loop")

    def __call__(self, s):
        return self.fun(s)

    def derivative(self, s):
        return self.dfun(s)

    def omega_range(self):
        ss = np.linspace(0.0, 1.0, 1025)
        ws = np.array([self.fun(float(s))[0] for s in ss])
        return float(ws.min()), float(ws.max())

    def sample(self, n):
        ss = np.linspace(0.0, 1.0, n, endpoint=False)
        pts = np.array([self.fun(float(s)) for s in ss])
        return ss, pts

    def orientation(self):
        """+1 for counter-clockwise traversal in the (omega, eps) plane."""
        _, pts = self.sample(512)
        w, e = pts[:, 0], pts[:, 1]
        area = 0.5 * np.sum(w * np.roll(e, -1) - np.roll(w, -1) * e)
        return 1.0 if area >= 0.0 else -1.0

    def spec(self):
        """Picklable reconstruction recipe, or None for closure-backed
        loops."""
        if self.kind == "square":
            keys = ("omega_min", "omega_max", "eps_min", "eps_max")
        elif self.kind == "ellipse":
            keys = ("omega0", "eps0", "a_omega", "a_eps", "phase")
        elif self.kind == "polyline":
            keys = ("vertices",)
        else:
            return None
        return (self.kind, {k: self.meta[k] for k in keys},
                bool(self.meta.get("reversed", False)))

    def reversed(self):
        """The same curve traversed with the opposite orientation."""
        fun, dfun = self.fun, self.dfun
        rev_breaks = tuple(sorted(1.0 - b for b in self.breakpoints
                                  if 0.0 < b < 1.0))
        return ParamLoop(
            kind=self.kind,
            fun=lambda s: fun(1.0 - s),
            dfun=lambda s: tuple(-d for d in dfun(1.0 - s)),
            breakpoints=rev_breaks,
            meta={**self.meta, "reversed": not self.meta.get("reversed",
                                                             False)},
        )


def make_square_loop(omega_min, omega_max, eps_min, eps_max) -> ParamLoop:
    """Counter-clockwise axis-aligned rectangle, starting at
    (omega_min, eps_min) and traversing the bottom edge first."""
    if not (0.0 < omega_min < omega_max):
        raise InvalidLoopError("need 0 < omega_min < omega_max")
    if not (0.0 <= eps_min < eps_max):
        raise InvalidLoopError("need 0 <= eps_min < eps_max")
    dw, de = omega_max - omega_min, eps_max - eps_min

    def fun(s):
        u = 4.0 * (s % 1.0)
        if u <= 1.0:
            return (omega_min + dw * u, eps_min)
        if u <= 2.0:
            return (omega_max, eps_min + de * (u - 1.0))
        if u <= 3.0:
            return (omega_max - dw * (u - 2.0), eps_max)
        return (omega_min, eps_max - de * (u - 3.0))

    def dfun(s):
        u = (4.0 * s) % 4.0
        if u < 1.0:
            return (4.0 * dw, 0.0)
        if u < 2.0:
            return (0.0, 4.0 * de)
        if u < 3.0:
            return (-4.0 * dw, 0.0)
        return (0.0, -4.0 * de)

    return ParamLoop(
        kind="square", fun=fun, dfun=dfun,
        breakpoints=(0.25, 0.5, 0.75),
        meta={"omega_min": omega_min, "omega_max": omega_max,
              "eps_min": eps_min, "eps_max": eps_max},
    )


def make_ellipse_loop(omega0, eps0, a_omega, a_eps, phase=0.0) -> ParamLoop:
    """Counter-clockwise ellipse omega = omega0 + a_omega cos(2 pi s + phase),
    eps = eps0 + a_eps sin(2 pi s + phase)."""
    if a_omega <= 0.0 or a_eps <= 0.0:
        raise InvalidLoopError("semi-axes must be positive")

    def fun(s):
        c = 2.0 * math.pi * s + phase
        return (omega0 + a_omega * math.cos(c), eps0 + a_eps * math.sin(c))

    def dfun(s):
        c = 2.0 * math.pi * s + phase
        return (-2.0 * math.pi * a_omega * math.sin(c),
                2.0 * math.pi * a_eps * math.cos(c))

    return ParamLoop(
        kind="ellipse", fun=fun, dfun=dfun, breakpoints=(),
        meta={"omega0": omega0, "eps0": eps0, "a_omega": a_omega,
              "a_eps": a_eps, "phase": phase},
    )


def make_polyline_loop(vertices) -> ParamLoop:
    """Closed polygon through the given (omega, eps) vertices, one equal
    s-interval per edge."""
    verts = [tuple(map(float, v)) for v in vertices]
    if len(verts) < 3:
        raise InvalidLoopError("polyline needs at least 3 vertices")
    if verts[0] != verts[-1]:
        verts = verts + [verts[0]]
    n = len(verts) - 1

    def fun(s):
        u = (s % 1.0) * n
        i = min(int(u), n - 1)
        f = u - i
        (w0, e0), (w1, e1) = verts[i], verts[i + 1]
        return (w0 + f * (w1 - w0), e0 + f * (e1 - e0))

    def dfun(s):
        u = ((s % 1.0) * n)
        i = min(int(u), n - 1)
        (w0, e0), (w1, e1) = verts[i], verts[i + 1]
        return (n * (w1 - w0), n * (e1 - e0))

    return ParamLoop(
        kind="polyline", fun=fun, dfun=dfun,
        breakpoints=tuple(i / n for i in range(1, n)),
        meta={"vertices": verts},
    )


def make_parametric_loop(fun, dfun=None, breakpoints=()) -> ParamLoop:
    """Arbitrary user-supplied closed curve; the derivative defaults to a
    central difference with step 1e-6."""
    if dfun is None:
        def dfun(s, _f=fun):
            h = 1e-6
            wp, ep = _f((s + h) % 1.0)
            wm, em = _f((s - h) % 1.0)
            return ((wp - wm) / (2.0 * h), (ep - em) / (2.0 * h))

    return ParamLoop(kind="parametric", fun=fun, dfun=dfun,
                     breakpoints=tuple(breakpoints), meta={})


def reference_square_loop() -> ParamLoop:
    """The reference square: omega in (0.6, 0.8), eps in (0.1, 0.3), ccw."""
    return make_square_loop(0.6, 0.8, 0.1, 0.3)


def reference_ellipse_loop() -> ParamLoop:
    """The reference ellipse: omega = 0.8 + 0.2 cos(2 pi s),
    eps = 0.1 + 0.1 sin(2 pi s), ccw."""
    return make_ellipse_loop(0.8, 0.1, 0.2, 0.1)


def loop_from_spec(kind, kwargs, is_reversed=False) -> ParamLoop:
    """Rebuild a loop from :meth:`ParamLoop.spec` output."""
    if kind == "square":
        loop = make_square_loop(**kwargs)
    elif kind == "ellipse":
        loop = make_ellipse_loop(**kwargs)
    elif kind == "polyline":
        loop = make_polyline_loop(kwargs["vertices"])
    else:
        raise ValueError(f"cannot rebuild loop of kind {kind!r}")
    return loop.reversed() if is_reversed else loop
