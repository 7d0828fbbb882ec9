"""Implicit time stepping for the time-space fractional diffusion equation.

The equation d^alpha/dt^alpha (u - u0) + (-Delta)^beta u = f on (a, b) with
zero exterior condition is advanced by the L1-implicit scheme:

    (b_0 I + A) u^n = sum_{j=1}^{n-1} (b_{j-1} - b_j) u^{n-j}
                      + b_{n-1} u^0 + f^n,

where A is the assembled fractional Laplacian and b_j the L1 weights.
Every coefficient on the right is positive and (b_0 I + A) is a symmetric
positive-definite M-matrix, so each step is uniquely solvable and
inverse-positive: nonnegative data propagate to nonnegative states
exactly, which is the discrete engine behind the maximum-principle
checks.  A Grunwald-Letnikov stepper is kept alongside for cross-checks
(first order; positivity not guaranteed).

Also here: the mollified test functions and the mollified weak-form
residual used by the weak maximum-principle machinery.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import linalg

from .fraclap import Field, FracLapMatrix, SpaceGrid, assemble_1d, bilinear_a
from .kernels import TimeMesh, TimeSeries, convolve, h_kernel, regularized_kernel
from .timefrac import gl_weights, l1_weights

__all__ = [
    "FracOrders",
    "ProblemSpec",
    "Solution",
    "step",
    "solve",
    "mollified_test_function",
    "weak_residual",
    "solution_to_csv",
    "solution_metadata",
]


@dataclass(frozen=True)
class FracOrders:
    """The pair of fractional orders, both in the open interval (0, 1)."""

    alpha: float
    beta: float

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0,1), got {self.alpha}")
        if not 0.0 < self.beta < 1.0:
            raise ValueError(f"beta must lie in (0,1), got {self.beta}")


@dataclass(frozen=True)
class ProblemSpec:
    """Data of one initial-exterior-value problem.

    ``forcing(x, t)`` is called once per step with the full node array and
    the step time and must return the sampled values.
    """

    orders: FracOrders
    grid: SpaceGrid
    mesh: TimeMesh
    u0: Field
    forcing: Callable[[np.ndarray, float], np.ndarray]

    def __post_init__(self):
        if self.u0.grid != self.grid:
            raise ValueError("u0 lives on a different grid")

    def forcing_samples(self) -> np.ndarray:
        """Forcing sampled on the space-time grid, shape (M+1, n)."""
        x = self.grid.nodes()
        out = np.empty((self.mesh.M + 1, self.grid.n))
        for j, t in enumerate(self.mesh.times()):
            out[j] = np.broadcast_to(np.asarray(self.forcing(x, float(t)), dtype=float), x.shape)
        return out


@dataclass(frozen=True)
class Solution:
    """States u^0..u^M (time-major array) plus the problem and sampled forcing."""

    problem: ProblemSpec
    states: np.ndarray = field(repr=False)
    forcing: np.ndarray = field(repr=False)

    def __post_init__(self):
        st = np.asarray(self.states, dtype=float)
        M, n = self.problem.mesh.M, self.problem.grid.n
        if st.shape != (M + 1, n):
            raise ValueError(f"states shape {st.shape}, expected {(M + 1, n)}")
        object.__setattr__(self, "states", st)

    def state(self, n: int) -> Field:
        return Field(self.problem.grid, self.states[n])


class _L1Stepper:
    """Factored L1-implicit stepper; reusable across steps and trials."""

    def __init__(self, alpha: float, tau: float, A: FracLapMatrix, nmax: int):
        self.b = l1_weights(alpha, tau, nmax)
        n = A.grid.n
        self.cho = linalg.cho_factor(self.b[0] * np.eye(n) + A.entries)

    def advance(self, history: np.ndarray, fn: np.ndarray) -> np.ndarray:
        """One step given history u^0..u^{n-1} (rows) and the forcing sample f^n."""
        n = history.shape[0]
        rhs = self.b[n - 1] * history[0] + fn
        if n > 1:
            w = self.b[:n-1] - self.b[1:n]  # b_{j-1} - b_j > 0, j = 1..n-1
            rhs = rhs + w @ history[:0:-1]  # u^{n-1}, ..., u^1
        return linalg.cho_solve(self.cho, rhs)


class _GLStepper:
    """Grunwald-Letnikov implicit stepper (cross-check path)."""

    def __init__(self, alpha: float, tau: float, A: FracLapMatrix, nmax: int):
        self.w = gl_weights(alpha, nmax)
        self.scale = tau ** (-alpha)
        n = A.grid.n
        self.cho = linalg.cho_factor(self.scale * np.eye(n) + A.entries)

    def advance(self, history: np.ndarray, fn: np.ndarray) -> np.ndarray:
        # rhs = f^n + tau^{-a} u^0 - tau^{-a} sum_{j=1}^{n} w_j (u^{n-j} - u^0)
        n = history.shape[0]
        wsum = float(np.sum(self.w[1 : n + 1]))
        hist_sum = self.w[1:n] @ history[:0:-1] if n > 1 else np.zeros_like(fn)
        hist_sum = hist_sum + self.w[n] * history[0]
        rhs = fn + self.scale * ((1.0 + wsum) * history[0] - hist_sum)
        return linalg.cho_solve(self.cho, rhs)


def step(problem: ProblemSpec, A: FracLapMatrix, history) -> Field:
    """Advance one L1-implicit step from states 0..n-1 (one-shot convenience).

    ``history`` is a sequence of Fields or a (n, grid.n) array.  The system
    matrix b_0 I + A is SPD and an M-matrix, so the step is uniquely
    solvable and maps nonnegative data to nonnegative states.
    """
    if isinstance(history, np.ndarray):
        hist = np.atleast_2d(np.asarray(history, dtype=float))
    else:
        hist = np.vstack([f.values for f in history])
    if hist.shape[0] < 1:
        raise ValueError("history must contain at least u^0")
    if A.grid != problem.grid:
        raise ValueError("matrix assembled on a different grid")
    n = hist.shape[0]
    stepper = _L1Stepper(problem.orders.alpha, problem.mesh.tau, A, nmax=n)
    fn = np.broadcast_to(
        np.asarray(problem.forcing(problem.grid.nodes(), n * problem.mesh.tau), dtype=float),
        (problem.grid.n,),
    )
    return Field(problem.grid, stepper.advance(hist, fn))


def solve(problem: ProblemSpec, A: FracLapMatrix | None = None, kind: str = "l1") -> Solution:
    """Assemble (once) and run all M steps; deterministic for fixed inputs."""
    if kind not in ("l1", "gl"):
        raise ValueError(f"kind must be 'l1' or 'gl', got {kind!r}")
    if A is None:
        A = assemble_1d(problem.grid, problem.orders.beta)
    elif A.grid != problem.grid:
        raise ValueError("matrix assembled on a different grid")
    M = problem.mesh.M
    nx = problem.grid.n
    fsamp = problem.forcing_samples()
    states = np.empty((M + 1, nx))
    states[0] = problem.u0.values
    if M == 0:
        return Solution(problem=problem, states=states, forcing=fsamp)
    cls = _L1Stepper if kind == "l1" else _GLStepper
    stepper = cls(problem.orders.alpha, problem.mesh.tau, A, nmax=M)
    for n in range(1, M + 1):
        states[n] = stepper.advance(states[:n], fsamp[n])
    return Solution(problem=problem, states=states, forcing=fsamp)


def mollified_test_function(phi: np.ndarray, m: int, mesh: TimeMesh) -> np.ndarray:
    """eta(x, t) = int_t^T h_m(s - t) phi(x, s) ds, exactly per cell.

    ``phi`` is a space-time array (time-major, shape (M+1, nx)), required
    nonnegative with phi(., T) = 0.  The exponential is integrated exactly
    against the piecewise-linear interpolant of phi on each cell, so eta
    inherits nonnegativity and eta(., T) = 0 exactly.
    """
    phi = np.asarray(phi, dtype=float)
    if phi.ndim != 2 or phi.shape[0] != mesh.M + 1:
        raise ValueError(f"phi must have shape (M+1, nx), got {phi.shape}")
    if np.any(phi < 0.0):
        raise ValueError("test-function profile must be nonnegative")
    if np.any(phi[-1] != 0.0):
        raise ValueError("test-function profile must vanish at t = T")
    if m < 1:
        raise ValueError(f"m must be a positive integer, got {m}")
    tau = mesh.tau
    M = mesh.M
    # On cell [s_j, s_{j+1}], with offsets a = s_j - t: the exact weights of
    # phi_j and phi_{j+1} against m exp(-m (s - t)) are
    #   w_left  = E(a) (1 + 1/(m tau)) - E(b) / (m tau) - E(a) (a' terms)...
    # assembled below from I0 = int m e^{-ms} ds and I1 = int m (s-a) e^{-ms} ds.
    eta = np.zeros_like(phi)
    ex = np.exp(-m * tau * np.arange(M + 1))  # e^{-m (s_q - t)} offsets on the grid
    for nt in range(M):  # eta at t_nt; eta[M] = 0
        nc = M - nt  # number of cells ahead
        Ea = ex[:nc]  # e^{-m a_j}, a_j = j tau
        Eb = ex[1 : nc + 1]
        I0 = Ea - Eb  # int_cell m e^{-ms} ds
        # int_cell m (s - a_j) e^{-ms} ds = a_j I0 + (I0/m - tau Eb)  - a_j I0
        I1 = I0 / m - tau * Eb
        w_left = I0 - I1 / tau
        w_right = I1 / tau
        eta[nt] = w_left @ phi[nt : nt + nc] + w_right @ phi[nt + 1 : nt + nc + 1]
    return eta


def weak_residual(sol: Solution, psi: Field, m: int, n: int) -> float:
    """LHS - RHS of the mollified weak form at time index n, tested with psi >= 0.

    Evaluates  int psi d/dt[(g_{1-alpha} * h_m) * (u - u0)] dx
             + a(h_m * u(., t_n), psi)  -  int (h_m * f)(., t_n) psi dx
    with discrete convolutions, a forward time difference at n (so n < M is
    required) and h-weighted sums for the space integrals.  For a solution
    of the discrete equation the residual shrinks under mesh refinement;
    for a supersolution (solved with forcing f + s, s >= 0, then tested
    against f) it stays above -tol.
    """
    problem = sol.problem
    if psi.grid != problem.grid:
        raise ValueError("test function lives on a different grid")
    if np.any(psi.values < 0.0):
        raise ValueError("test function must be nonnegative")
    if m < 1:
        raise ValueError(f"m must be a positive integer, got {m}")
    M = problem.mesh.M
    if not 1 <= n < M:
        raise ValueError(f"forward difference needs 1 <= n < M, got n={n}")
    tau = problem.mesh.tau
    h = problem.grid.h
    alpha = problem.orders.alpha
    greg = regularized_kernel(alpha, m, problem.mesh)
    hm = TimeSeries(tau, h_kernel(m, problem.mesh.times()))

    dstates = sol.states - sol.states[0]
    nx = problem.grid.n
    ddt = np.empty(nx)
    hu_n = np.empty(nx)
    hf_n = np.empty(nx)
    for i in range(nx):
        conv_g = convolve(greg, TimeSeries(tau, dstates[:, i])).values
        ddt[i] = (conv_g[n + 1] - conv_g[n]) / tau
        hu_n[i] = convolve(hm, TimeSeries(tau, sol.states[:, i])).values[n]
        hf_n[i] = convolve(hm, TimeSeries(tau, sol.forcing[:, i])).values[n]
    term_time = h * float(psi.values @ ddt)
    term_form = bilinear_a(Field(problem.grid, hu_n), psi, problem.orders.beta)
    term_load = h * float(psi.values @ hf_n)
    return term_time + term_form - term_load


def solution_to_csv(sol: Solution) -> str:
    """Serialize as CSV rows t, x, u with 17 significant digits."""
    lines = ["t,x,u"]
    times = sol.problem.mesh.times()
    xs = sol.problem.grid.nodes()
    for nt, t in enumerate(times):
        for i, x in enumerate(xs):
            lines.append(f"{t:.17g},{x:.17g},{sol.states[nt, i]:.17g}")
    return "\n".join(lines) + "\n"


def solution_metadata(sol: Solution, config_hash: str = "") -> dict:
    """Metadata sidecar content: orders, grid, mesh, and the config hash."""
    p = sol.problem
    return {
        "alpha": p.orders.alpha,
        "beta": p.orders.beta,
        "domain": [p.grid.a, p.grid.b],
        "n": p.grid.n,
        "T": p.mesh.T,
        "M": p.mesh.M,
        "config_hash": config_hash,
    }


def config_hash(config: dict) -> str:
    """Stable content hash of a configuration mapping."""
    blob = json.dumps(config, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()
