"""Discrete time-fractional derivatives and their sign/convexity structure.

Two classical discretizations of the regularized fractional derivative
d^alpha/dt^alpha (u - u(0)) are provided: the L1 scheme (piecewise-linear
convolution quadrature, positive decreasing weights, order 2-alpha) and
the Grunwald-Letnikov scheme (binomial weights, first order).  On top of
them sit three verification tools:

* a residual evaluator for the convolution-derivative product identity
  H'(u) d/dt(k*u) = d/dt(k*H(u)) + (H'(u)u - H(u)) k
                    + int (H(u(t-s)) - H(u(t)) - H'(u(t))[u(t-s)-u(t)]) (-k') ds,
  valid for any C^1 function H and any W^{1,1} kernel k;
* per-index checkers for the convex-part inequalities that follow from it
  when H is the squared positive part and k is nonnegative nonincreasing;
* the extremum sign check: at a discrete global max (min) the L1
  derivative of u - u(0) is >= 0 (<= 0).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import special

from .kernels import TimeSeries, convolve

__all__ = [
    "CaputoScheme",
    "ConvexProbe",
    "ConvexVerdicts",
    "gl_weights",
    "l1_weights",
    "caputo_apply",
    "fundamental_identity_residual",
    "convex_inequality_check",
    "rl_extremum_sign",
]


def gl_weights(alpha: float, n: int) -> np.ndarray:
    """Grunwald-Letnikov weights w_0..w_n: w_0 = 1, w_j = w_{j-1}(1-(alpha+1)/j).

    These are (-1)^j * binom(alpha, j); partial sums decrease to 0 from
    above (binomial theorem at x = 1).
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if n == 0:
        return np.ones(1)
    j = np.arange(1, n + 1)
    return np.concatenate(([1.0], np.cumprod(1.0 - (alpha + 1.0) / j)))


def l1_weights(alpha: float, tau: float, n: int) -> np.ndarray:
    """L1 weights b_j = tau^(-alpha) ((j+1)^(1-alpha) - j^(1-alpha)) / Gamma(2-alpha).

    Strictly positive and strictly decreasing in j (concavity of j^(1-alpha)).
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if not tau > 0:
        raise ValueError(f"tau must be positive, got {tau}")
    j = np.arange(n + 1, dtype=float)
    return tau ** (-alpha) * ((j + 1.0) ** (1.0 - alpha) - j ** (1.0 - alpha)) / special.gamma(2.0 - alpha)


@dataclass(frozen=True)
class CaputoScheme:
    """A discrete fractional-derivative rule: order, step, kind, weight table."""

    alpha: float
    tau: float
    kind: str  # "l1" or "gl"
    weights: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0,1), got {self.alpha}")
        if not self.tau > 0:
            raise ValueError(f"tau must be positive, got {self.tau}")
        if self.kind not in ("l1", "gl"):
            raise ValueError(f"kind must be 'l1' or 'gl', got {self.kind!r}")

    @classmethod
    def build(cls, alpha: float, tau: float, kind: str, nmax: int) -> "CaputoScheme":
        """Precompute weights 0..nmax for the requested kind."""
        if kind == "l1":
            w = l1_weights(alpha, tau, nmax)
        elif kind == "gl":
            w = gl_weights(alpha, nmax)
        else:
            raise ValueError(f"kind must be 'l1' or 'gl', got {kind!r}")
        return cls(alpha, tau, kind, w)


def caputo_apply(u: TimeSeries, scheme: CaputoScheme, n: int) -> float:
    """Discrete d^alpha/dt^alpha (u - u_0) at t_n.

    L1 kind: sum_{j=0}^{n-1} b_j (u_{n-j} - u_{n-j-1}); GL kind:
    tau^(-alpha) sum_{j=0}^{n} w_j (u_{n-j} - u_0).  Exactly zero for
    constant u; n = 0 returns 0 by convention (empty sum).
    """
    if not 0 <= n <= len(u) - 1:
        raise ValueError(f"index n={n} outside series of length {len(u)}")
    if abs(scheme.tau - u.tau) > 1e-14 * max(scheme.tau, u.tau):
        raise ValueError(f"scheme step {scheme.tau} does not match series step {u.tau}")
    if n == 0:
        return 0.0
    v = u.values
    if scheme.kind == "l1":
        if len(scheme.weights) < n:
            raise ValueError(f"scheme weights cover {len(scheme.weights)} lags, need {n}")
        diffs = v[1 : n + 1] - v[:n]
        return float(np.dot(scheme.weights[:n], diffs[::-1]))
    if len(scheme.weights) < n + 1:
        raise ValueError(f"scheme weights cover {len(scheme.weights)} lags, need {n + 1}")
    return float(u.tau ** (-scheme.alpha) * np.dot(scheme.weights[: n + 1], v[n::-1] - v[0]))


@dataclass(frozen=True)
class ConvexProbe:
    """A C^1 convex function H with derivative dH, both numpy-vectorized."""

    H: Callable[[np.ndarray], np.ndarray]
    dH: Callable[[np.ndarray], np.ndarray]


def fundamental_identity_residual(
    u: TimeSeries, probe: ConvexProbe, k: TimeSeries, n: int
) -> float:
    """LHS - RHS of the convolution-derivative product identity at t_n.

    Discrete conventions, fixed once: left-rectangle causal convolutions,
    forward difference for d/dt (so samples up to n+1 are required),
    centered differences for dk/ds (one-sided at the ends), trapezoidal
    quadrature for the remainder integral.  For linear H the residual is
    zero to roundoff; for smooth u it shrinks under mesh refinement.

    The kernel must be a regular (W^{1,1}-type) kernel sampled on the
    mesh; a sample that is not finite (raw power-law kernel at t = 0) is
    rejected.
    """
    if len(k) != len(u):
        raise ValueError(f"length mismatch: kernel {len(k)} vs signal {len(u)}")
    if abs(k.tau - u.tau) > 1e-14 * max(k.tau, u.tau):
        raise ValueError(f"mesh mismatch: tau {k.tau} vs {u.tau}")
    if not np.all(np.isfinite(k.values)):
        raise ValueError("kernel samples must be finite; use a regularized kernel")
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if n + 1 > len(u) - 1:
        raise ValueError(f"forward difference at n={n} needs sample n+1; series too short")
    tau = u.tau
    v = u.values
    Hu = np.asarray(probe.H(v), dtype=float)
    conv_u = convolve(k, u).values
    conv_H = convolve(k, TimeSeries(tau, Hu)).values
    un = v[n]
    dHn = float(probe.dH(un))
    Hn = float(probe.H(un))

    lhs = dHn * (conv_u[n + 1] - conv_u[n]) / tau
    term_conv = (conv_H[n + 1] - conv_H[n]) / tau
    term_jump = (-Hn + dHn * un) * k.values[n]
    # Remainder integral over s in [0, t_n]; s_j = j*tau pairs with u_{n-j}.
    rev = v[n::-1]
    bracket = np.asarray(probe.H(rev), dtype=float) - Hn - dHn * (rev - un)
    dk = np.gradient(k.values, tau)
    term_rem = float(np.trapezoid(bracket * (-dk[: n + 1]), dx=tau))
    return float(lhs - (term_conv + term_jump + term_rem))


@dataclass(frozen=True)
class ConvexVerdicts:
    """Per-index outcomes of the three convex-part inequalities.

    Arrays are indexed like the input series; entry 0 is vacuously True
    (no completed step).  ``plus_part``: u+_n D(k*u)_n >= 1/2 D(k*(u+)^2)_n
    within tol; ``plus_part_negated``: the same inequality for -u;
    ``minus_part``: u-_n D(k*u)_n <= -1/2 D(k*(u-)^2)_n within tol.
    """

    plus_part: np.ndarray
    plus_part_negated: np.ndarray
    minus_part: np.ndarray
    tol: float

    def all_ok(self) -> bool:
        return bool(
            np.all(self.plus_part) and np.all(self.plus_part_negated) and np.all(self.minus_part)
        )


def convex_inequality_check(u: TimeSeries, k: TimeSeries, tol: float | None = None) -> ConvexVerdicts:
    """Check the convex-part inequalities of the fractional calculus at every index.

    The difference quotient D at index n spans the last completed cell
    [t_{n-1}, t_n] and is paired with the parts of u at its right endpoint
    t_n; in that pairing the inequalities hold in exact arithmetic for any
    kernel whose samples are nonnegative and nonincreasing (Abel summation
    plus convexity of the squared positive part), so the default tolerance
    only absorbs roundoff: tol = 1e-10 * max(1, ||u||_inf^2 * ||k||_L1).

    The kernel samples are required to be nonnegative and nonincreasing;
    for a hump-shaped kernel (e.g. the mollified power-law family) the
    inequalities are genuinely false, so such input is rejected rather
    than reported as a violation.
    """
    if not np.all(np.isfinite(k.values)):
        raise ValueError("kernel samples must be finite; use a regularized kernel")
    if np.any(k.values < 0.0) or np.any(np.diff(k.values) > 0.0):
        raise ValueError(
            "convexity inequalities require a nonnegative nonincreasing kernel "
            "(use monotone_regularized_kernel)"
        )
    tau = u.tau
    v = u.values
    up = np.maximum(v, 0.0)
    um = np.maximum(-v, 0.0)
    if tol is None:
        knorm = tau * float(np.sum(np.abs(k.values)))
        tol = 1e-10 * max(1.0, float(np.max(np.abs(v))) ** 2 * knorm)

    def ts(vals):
        return TimeSeries(tau, vals)

    cu = convolve(k, u).values
    cp2 = convolve(k, ts(up**2)).values
    cm2 = convolve(k, ts(um**2)).values

    def D(x):
        return (x[1:] - x[:-1]) / tau

    s_plus = up[1:] * D(cu) - 0.5 * D(cp2)
    s_plus_neg = um[1:] * D(-cu) - 0.5 * D(cm2)
    s_minus = -(um[1:] * D(cu) + 0.5 * D(cm2))
    pad = np.array([True])
    return ConvexVerdicts(
        plus_part=np.concatenate([pad, s_plus >= -tol]),
        plus_part_negated=np.concatenate([pad, s_plus_neg >= -tol]),
        minus_part=np.concatenate([pad, s_minus >= -tol]),
        tol=tol,
    )


def rl_extremum_sign(
    u: TimeSeries, alpha: float, n0: int, mode: str, tol: float | None = None
) -> tuple[float, bool]:
    """L1-discrete derivative of u - u_0 at a global extremum index, plus verdict.

    At a discrete global max over 0..M the value is >= 0 exactly (and <= 0
    at a min); the verdict allows -tol (max mode) or +tol (min mode) of
    roundoff, with tol defaulting to 1e-10 * tau^(-alpha) * max(1, range of u).
    The index must satisfy n0 >= 1 and actually attain the extremum.
    """
    if mode not in ("max", "min"):
        raise ValueError(f"mode must be 'max' or 'min', got {mode!r}")
    if n0 < 1:
        raise ValueError("extremum sign check needs n0 >= 1 (t must be positive)")
    if not 0 <= n0 <= len(u) - 1:
        raise ValueError(f"index n0={n0} outside series of length {len(u)}")
    v = u.values
    if mode == "max" and v[n0] < np.max(v):
        raise ValueError(f"u does not attain its maximum at n0={n0}")
    if mode == "min" and v[n0] > np.min(v):
        raise ValueError(f"u does not attain its minimum at n0={n0}")
    scheme = CaputoScheme.build(alpha, u.tau, "l1", len(u) - 1)
    value = caputo_apply(u, scheme, n0)
    if tol is None:
        tol = 1e-10 * u.tau ** (-alpha) * max(1.0, float(np.ptp(v)))
    ok = value >= -tol if mode == "max" else value <= tol
    return value, bool(ok)
