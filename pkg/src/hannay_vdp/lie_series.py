"""Closed-form perturbative results for the van der Pol limit cycle.

Reduced amplitude/phase rates on the invariant manifold, the limit-cycle
fixed point, the harmonic solution series, the frequency series, the
action-angle formulation, and the adiabatic connection one-form.

All series coefficients are stored as exact rationals and converted to
float at call time; truncation is uniform in the power of the
nonlinearity strength.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .dual_dynamics import Params

_ORDERS = (1, 2, 3, 4)


def _check_order(order: int) -> int:
    if order not in _ORDERS:
        raise ValueError(f"series order must be one of {_ORDERS}, got {order}")
    return order


@dataclass(frozen=True)
class Connection:
    """Averaged connection one-form on (omega, eps) parameter space."""

    A1: float  # coefficient of d(omega)
    A2: float  # coefficient of d(eps); identically zero at this order


def reduced_alpha_rate(alpha1: float, p: Params) -> float:
    """Amplitude rate d(alpha1)/dt on the invariant manifold.

    Two-term truncation: the cubic-damping balance at first order plus the
    third-order correction.  Zero at alpha1 = 0 and at the limit-cycle
    fixed point.
    """
    if alpha1 < 0.0:
        raise ValueError("alpha1 must be non-negative")
    w2 = p.omega * p.omega
    e = p.eps
    first = alpha1 - alpha1 * alpha1 / w2
    third = (-9.0 * alpha1**4 + 16.0 * alpha1**3 * w2
             - 8.0 * alpha1**2 * w2 * w2) / (32.0 * w2**4)
    return e * first + e**3 * third


def reduced_beta_rate(alpha1: float, p: Params) -> float:
    """Phase-offset rate d(beta1)/dt on the invariant manifold (eps^4)."""
    if alpha1 < 0.0:
        raise ValueError("alpha1 must be non-negative")
    w2 = p.omega * p.omega
    e = p.eps
    second = (-11.0 * alpha1**2 + 12.0 * alpha1 * w2 - 2.0 * w2 * w2) \
        / (16.0 * w2**3)
    fourth = (-2527.0 * alpha1**4 + 5032.0 * alpha1**3 * w2
              - 3052.0 * alpha1**2 * w2**2 + 528.0 * alpha1 * w2**3
              - 24.0 * w2**4) / (3072.0 * w2**6)
    return e**2 * second + e**4 * fourth


def fixed_point_alpha(p: Params) -> float:
    """Nontrivial fixed point of the reduced amplitude flow: omega^2 - eps^2/32."""
    return p.omega * p.omega - p.eps * p.eps / 32.0


def beta1_rate(p: Params) -> float:
    """Phase-offset drift on the limit cycle: -eps^2/16 w^2 + 17 eps^4/3072 w^4."""
    e2 = p.eps * p.eps
    w2 = p.omega * p.omega
    return -e2 / (16.0 * w2) + 17.0 * e2 * e2 / (3072.0 * w2 * w2)


_FREQ_TERMS = {
    # eps power -> (rational coefficient, omega power)
    0: (Fraction(1), 1),
    2: (Fraction(-1, 16), -1),
    4: (Fraction(17, 3072), -3),
}


def limit_cycle_frequency(p: Params, order: int = 4) -> float:
    """Limit-cycle angular frequency series, truncated at the given order.

    Order-k evaluation drops every term whose eps power exceeds k.
    """
    _check_order(order)
    total = 0.0
    for k, (coeff, wpow) in _FREQ_TERMS.items():
        if k <= order:
            total += float(coeff) * p.eps**k * p.omega**wpow
    return total


# Harmonic series for x(t): lists of (harmonic, kind, rational coefficient),
# grouped by eps power; each group carries omega**(-eps power).
_SOLUTION_TERMS = {
    0: [(1, "sin", Fraction(2))],
    1: [(3, "cos", Fraction(-1, 4))],
    2: [(1, "sin", Fraction(1, 64)), (3, "sin", Fraction(3, 32)),
        (5, "sin", Fraction(-5, 96))],
    3: [(1, "cos", Fraction(13, 256)), (3, "cos", Fraction(15, 512)),
        (5, "cos", Fraction(-85, 2304)), (7, "cos", Fraction(7, 576))],
}


def solution_x(B1: float, p: Params) -> float:
    """Harmonic series for the limit-cycle solution x as a function of the
    running phase B1, through third order in the nonlinearity."""
    total = 0.0
    for k, terms in _SOLUTION_TERMS.items():
        scale = p.eps**k / p.omega**k
        for n, kind, coeff in terms:
            f = math.sin(n * B1) if kind == "sin" else math.cos(n * B1)
            total += float(coeff) * scale * f
    return total


def solution_amplitude(p: Params, n_grid: int = 20001) -> float:
    """Max of the solution series over one period of the running phase."""
    best = 0.0
    for i in range(n_grid):
        b = 2.0 * math.pi * i / (n_grid - 1)
        v = abs(solution_x(b, p))
        if v > best:
            best = v
    return best


def action_fixed_point(p: Params) -> float:
    """Nontrivial fixed point of the action rate: omega - eps^2/(32 omega)."""
    return p.omega - p.eps * p.eps / (32.0 * p.omega)


def action_rate(I1: float, p: Params) -> float:
    """Action rate dI1/dt in the action-angle formulation (eps^3)."""
    w = p.omega
    e = p.eps
    first = I1 - I1 * I1 / w
    third = (-9.0 * I1**4 + 16.0 * I1**3 * w - 8.0 * I1**2 * w * w) \
        / (32.0 * w**5)
    return e * first + e**3 * third


def phi1_rate(I1: float, p: Params) -> float:
    """Angle rate dphi1/dt in the action-angle formulation (eps^2)."""
    w = p.omega
    e = p.eps
    return w - e * e * (11.0 * I1 * I1 - 12.0 * I1 * w + 2.0 * w * w) \
        / (16.0 * w**3)


def connection(p: Params) -> Connection:
    """Adiabatic connection for the limit-cycle angle: A = (-eps/8 omega^2, 0)."""
    return Connection(A1=-p.eps / (8.0 * p.omega * p.omega), A2=0.0)
