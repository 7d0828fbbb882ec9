"""Time-stepper tests.

The scalar-relaxation oracle: with the operator replaced by the 1x1
matrix [lambda] and zero forcing, the exact solution is
u0 * E_alpha(-lambda t^alpha), evaluated by the independent
Mittag-Leffler routine.  Positivity and comparison are exact discrete
properties of the L1 + M-matrix scheme and are tested at roundoff scale.
"""

import numpy as np
import pytest

from tsfrac.fraclap import Field, FracLapMatrix, SpaceGrid, assemble_1d
from tsfrac.kernels import TimeMesh, mittag_leffler
from tsfrac.solver import (
    FracOrders,
    ProblemSpec,
    Solution,
    config_hash,
    mollified_test_function,
    solution_metadata,
    solution_to_csv,
    solve,
    step,
    weak_residual,
)

ZERO_F = lambda x, t: np.zeros_like(x)


def scalar_problem(alpha, M, u0=1.0, T=1.0):
    grid = SpaceGrid(-1.0, 1.0, 1)
    lam = FracLapMatrix(beta=0.5, grid=grid, entries=np.array([[1.0]]), c=1.0)
    problem = ProblemSpec(
        FracOrders(alpha, 0.5), grid, TimeMesh(T, M), Field(grid, np.array([u0])), ZERO_F
    )
    return problem, lam


def bump_problem(alpha=0.5, beta=0.5, n=32, M=48, u0_fn=None, f_fn=None):
    grid = SpaceGrid(-1.0, 1.0, n)
    mesh = TimeMesh(1.0, M)
    x = grid.nodes()
    u0 = Field(grid, u0_fn(x) if u0_fn else np.maximum(0.0, 1.0 - 4.0 * x**2))
    return ProblemSpec(FracOrders(alpha, beta), grid, mesh, u0, f_fn or ZERO_F)


class TestStepAndSolve:
    def test_zero_data_zero_solution(self):
        problem = bump_problem(u0_fn=lambda x: np.zeros_like(x))
        sol = solve(problem)
        assert np.all(sol.states == 0.0)

    def test_empty_mesh_returns_initial_state(self):
        grid = SpaceGrid(-1.0, 1.0, 8)
        problem = ProblemSpec(
            FracOrders(0.5, 0.5), grid, TimeMesh(1.0, 0), Field(grid, np.ones(8)), ZERO_F
        )
        sol = solve(problem)
        assert sol.states.shape == (1, 8)
        np.testing.assert_array_equal(sol.states[0], np.ones(8))

    def test_step_matches_solve(self):
        problem = bump_problem(M=12)
        A = assemble_1d(problem.grid, problem.orders.beta)
        sol = solve(problem, A=A)
        for k in (1, 5, 12):
            out = step(problem, A, sol.states[:k])
            np.testing.assert_allclose(out.values, sol.states[k], rtol=0, atol=1e-13)

    def test_scalar_relaxation_vs_mittag_leffler(self):
        problem, lam = scalar_problem(0.5, 2048)
        sol = solve(problem, A=lam)
        exact = mittag_leffler(0.5, -1.0)
        assert abs(sol.states[-1, 0] - exact) / exact < 1e-2

    def test_gl_cross_check_on_scalar(self):
        problem, lam = scalar_problem(0.5, 2048)
        got = solve(problem, A=lam, kind="gl").states[-1, 0]
        assert got == pytest.approx(mittag_leffler(0.5, -1.0), rel=1e-2)

    def test_exact_positivity(self):
        rng = np.random.default_rng(51)
        grid = SpaceGrid(-1.0, 1.0, 48)
        mesh = TimeMesh(1.0, 64)
        x = grid.nodes()
        matrices = {}
        for _ in range(20):
            alpha = rng.choice([0.3, 0.5, 0.7, 0.9])
            beta = rng.choice([0.3, 0.5, 0.7, 0.9])
            if beta not in matrices:
                matrices[beta] = assemble_1d(grid, beta)
            c = rng.uniform(-1, 1, 5)
            u0 = np.maximum(0.0, sum(ci * np.sin((k + 1) * np.pi * (x + 1) / 2) for k, ci in enumerate(c)))
            d = rng.uniform(-1, 1, 5)
            f = lambda xx, t, d=d: np.maximum(
                0.0, sum(di * np.sin((k + 1) * np.pi * (xx + 1) / 2) for k, di in enumerate(d))
            ) * abs(np.cos(3 * t))
            problem = ProblemSpec(FracOrders(alpha, beta), grid, mesh, Field(grid, u0), f)
            sol = solve(problem, A=matrices[beta])
            scale = max(1.0, np.max(u0), np.max(sol.forcing))
            assert sol.states.min() >= -1e-12 * scale

    def test_comparison_principle_in_forcing(self):
        rng = np.random.default_rng(52)
        grid = SpaceGrid(-1.0, 1.0, 32)
        mesh = TimeMesh(1.0, 40)
        x = grid.nodes()
        A = assemble_1d(grid, 0.6)
        for _ in range(10):
            base = rng.uniform(-1, 1, 4)
            extra = rng.uniform(0, 1, 4)
            f1 = lambda xx, t, b=base: sum(bi * np.sin((k + 1) * np.pi * (xx + 1) / 2) for k, bi in enumerate(b)) * np.cos(t)
            f2 = lambda xx, t, b=base, e=extra: f1(xx, t) + sum(
                ei * (1 + np.sin((k + 1) * np.pi * (xx + 1) / 2) ** 2) for k, ei in enumerate(e)
            )
            u0 = Field(grid, rng.uniform(-1, 1, 32))
            s1 = solve(ProblemSpec(FracOrders(0.4, 0.6), grid, mesh, u0, f1), A=A)
            s2 = solve(ProblemSpec(FracOrders(0.4, 0.6), grid, mesh, u0, f2), A=A)
            scale = max(1.0, np.max(np.abs(s1.states)), np.max(np.abs(s2.states)))
            assert np.all(s1.states <= s2.states + 1e-12 * scale)

    def test_exterior_condition_breaks_translation_invariance(self):
        # constant initial data decays fastest next to the boundary
        problem = bump_problem(n=33, M=32, u0_fn=lambda x: np.ones_like(x))
        sol = solve(problem)
        final = sol.states[-1]
        assert final[0] < final[16]
        assert final[-1] < final[16]

    def test_determinism_byte_identical(self):
        problem = bump_problem(M=16, n=16)
        csv1 = solution_to_csv(solve(problem))
        csv2 = solution_to_csv(solve(problem))
        assert csv1 == csv2

    def test_near_classical_limit(self):
        # alpha = beta = 0.95 against backward Euler + 3-point Laplacian;
        # soft check: the fractional constant degenerates as beta -> 1
        n, M, T = 64, 128, 0.5
        grid = SpaceGrid(-1.0, 1.0, n)
        x = grid.nodes()
        u0 = np.sin(np.pi * (x + 1.0) / 2.0)
        problem = ProblemSpec(
            FracOrders(0.95, 0.95), grid, TimeMesh(T, M), Field(grid, u0), ZERO_F
        )
        frac = solve(problem).states[-1]

        h, tau = grid.h, T / M
        lap = (np.diag(np.full(n, 2.0)) - np.diag(np.ones(n - 1), 1) - np.diag(np.ones(n - 1), -1)) / h**2
        system = np.eye(n) + tau * lap
        u = u0.copy()
        for _ in range(M):
            u = np.linalg.solve(system, u)
        assert np.max(np.abs(frac - u)) < 0.1

    def test_invalid_inputs(self):
        with pytest.raises(ValueError):
            FracOrders(0.0, 0.5)
        with pytest.raises(ValueError):
            FracOrders(0.5, 1.0)
        problem = bump_problem()
        with pytest.raises(ValueError):
            solve(problem, kind="rk4")
        other = assemble_1d(SpaceGrid(0.0, 1.0, 32), 0.5)
        with pytest.raises(ValueError):
            solve(problem, A=other)


class TestMollifiedTestFunction:
    def test_zero_profile(self):
        mesh = TimeMesh(1.0, 16)
        eta = mollified_test_function(np.zeros((17, 3)), 4, mesh)
        assert np.all(eta == 0.0)

    def test_limiting_plateau_closed_form(self):
        # phi = 1 below T: eta(t) = 1 - exp(-m (T - t)) up to the taper cell
        m, M = 8, 1024
        mesh = TimeMesh(1.0, M)
        phi = np.ones((M + 1, 2))
        phi[-1] = 0.0
        eta = mollified_test_function(phi, m, mesh)
        t = mesh.times()
        expected = 1.0 - np.exp(-m * (1.0 - t))
        # away from T the only discrepancy is the final taper cell's mass
        taper = m * np.exp(-m * (1.0 - mesh.tau)) * mesh.tau
        assert abs(eta[0, 0] - expected[0]) < taper
        assert np.max(np.abs(eta[:, 0] - expected)) < m * mesh.tau

    def test_nonnegativity_preserved(self):
        rng = np.random.default_rng(61)
        mesh = TimeMesh(1.0, 64)
        phi = rng.uniform(0.0, 2.0, (65, 5))
        phi[-1] = 0.0
        eta = mollified_test_function(phi, 16, mesh)
        assert np.all(eta >= 0.0)
        assert np.all(eta[-1] == 0.0)

    def test_contract_violations(self):
        mesh = TimeMesh(1.0, 8)
        bad = -np.ones((9, 2))
        bad[-1] = 0.0
        with pytest.raises(ValueError):
            mollified_test_function(bad, 4, mesh)
        nonzero_end = np.ones((9, 2))
        with pytest.raises(ValueError):
            mollified_test_function(nonzero_end, 4, mesh)


class TestWeakResidual:
    @staticmethod
    def _bump_psi(grid):
        x = grid.nodes()
        return Field(grid, np.maximum(0.0, 1.0 - 9.0 * x**2) ** 2)

    def test_zero_test_function(self):
        problem = bump_problem(M=16, n=16)
        sol = solve(problem)
        psi = Field(problem.grid, np.zeros(16))
        assert weak_residual(sol, psi, 8, 8) == 0.0

    def test_negative_test_function_rejected(self):
        problem = bump_problem(M=16, n=16)
        sol = solve(problem)
        with pytest.raises(ValueError):
            weak_residual(sol, Field(problem.grid, -np.ones(16)), 8, 8)

    def test_self_convergence_for_solved_problem(self):
        f = lambda x, t: 0.5 * (1.0 + np.cos(np.pi * x)) * np.exp(-t)
        resids = []
        for M, n in ((32, 24), (64, 48), (128, 96)):
            problem = bump_problem(M=M, n=n, f_fn=f)
            sol = solve(problem)
            resids.append(abs(weak_residual(sol, self._bump_psi(problem.grid), 64, M // 2)))
        assert resids[0] > resids[1] > resids[2]

    def test_supersolution_residual_positive(self):
        # solve with f + 1, then test the weak form against f alone
        f = lambda x, t: 0.5 * (1.0 + np.cos(np.pi * x))
        problem = bump_problem(M=64, n=48, f_fn=lambda x, t: f(x, t) + 1.0)
        sol = solve(problem)
        tested = Solution(problem=problem, states=sol.states, forcing=sol.forcing - 1.0)
        r = weak_residual(tested, self._bump_psi(problem.grid), 64, 32)
        assert r > 0.1  # roughly int psi * (h_m * 1) for large m

    def test_index_bounds(self):
        problem = bump_problem(M=16, n=8)
        sol = solve(problem)
        psi = Field(problem.grid, np.ones(8))
        with pytest.raises(ValueError):
            weak_residual(sol, psi, 8, 16)  # forward difference needs n < M
        with pytest.raises(ValueError):
            weak_residual(sol, psi, 8, 0)


class TestSerialization:
    def test_csv_layout(self):
        problem = bump_problem(M=2, n=3)
        sol = solve(problem)
        lines = solution_to_csv(sol).strip().split("\n")
        assert lines[0] == "t,x,u"
        assert len(lines) == 1 + 3 * 3
        t, x, u = (float(v) for v in lines[1].split(","))
        assert (t, x) == (0.0, problem.grid.nodes()[0])
        assert u == pytest.approx(sol.states[0, 0])

    def test_metadata_and_hash_stability(self):
        problem = bump_problem(M=2, n=3)
        sol = solve(problem)
        meta = solution_metadata(sol, "deadbeef")
        assert meta["alpha"] == 0.5 and meta["M"] == 2 and meta["config_hash"] == "deadbeef"
        h1 = config_hash({"a": 1, "b": [1, 2]})
        h2 = config_hash({"b": [1, 2], "a": 1})
        assert h1 == h2 and len(h1) == 64
