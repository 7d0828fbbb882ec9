"""Maximum-principle harness tests.

Boundary classification is checked exhaustively on small grids against
the definition (parabolic boundary = initial slice plus lateral layer,
never the terminal interior).  The theorem checks themselves are exact
discrete statements, so the tolerances here are roundoff-sized.
"""

import json

import numpy as np
import pytest

from tsfrac.fraclap import Field, SpaceGrid
from tsfrac.kernels import TimeMesh
from tsfrac.principles import (
    BoundaryClass,
    TrialConfig,
    check_nonnegativity,
    check_parabolic_boundary,
    classify,
    in_parabolic_boundary,
    report_to_json,
    run_trials,
)
from tsfrac.solver import FracOrders, ProblemSpec, solve

ZERO_F = lambda x, t: np.zeros_like(x)


def small_problem(u0_vals, f=ZERO_F, alpha=0.5, beta=0.5, n=16, M=12):
    grid = SpaceGrid(-1.0, 1.0, n)
    mesh = TimeMesh(1.0, M)
    return ProblemSpec(FracOrders(alpha, beta), grid, mesh, Field(grid, u0_vals), f)


class TestClassify:
    def setup_method(self):
        self.grid = SpaceGrid(-1.0, 1.0, 8)
        self.mesh = TimeMesh(1.0, 6)

    def test_initial_slice(self):
        assert classify(self.grid, self.mesh, 4, 0) is BoundaryClass.INITIAL

    def test_edge_adjacent_at_final_time_is_lateral(self):
        assert classify(self.grid, self.mesh, 1, 6) is BoundaryClass.LATERAL
        assert classify(self.grid, self.mesh, 8, 6) is BoundaryClass.LATERAL

    def test_ghost_nodes_are_lateral(self):
        for n in (0, 3, 6):
            assert classify(self.grid, self.mesh, 0, n) is BoundaryClass.LATERAL
            assert classify(self.grid, self.mesh, 9, n) is BoundaryClass.LATERAL

    def test_center_at_final_time_is_terminal(self):
        assert classify(self.grid, self.mesh, 4, 6) is BoundaryClass.TERMINAL

    def test_bulk_is_interior(self):
        assert classify(self.grid, self.mesh, 4, 3) is BoundaryClass.INTERIOR

    def test_exhaustive_partition(self):
        counts = {cls: 0 for cls in BoundaryClass}
        for i in range(self.grid.n + 2):
            for n in range(self.mesh.M + 1):
                cls = classify(self.grid, self.mesh, i, n)
                counts[cls] += 1
                parabolic = cls in (BoundaryClass.INITIAL, BoundaryClass.LATERAL)
                assert in_parabolic_boundary(self.grid, self.mesh, i, n) == parabolic
                if cls is BoundaryClass.TERMINAL:
                    assert not parabolic
        total = (self.grid.n + 2) * (self.mesh.M + 1)
        assert sum(counts.values()) == total
        assert all(c > 0 for c in counts.values())

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            classify(self.grid, self.mesh, 10, 0)
        with pytest.raises(ValueError):
            classify(self.grid, self.mesh, 0, 7)


class TestNonnegativity:
    def test_zero_data_exact_zero(self):
        sol = solve(small_problem(np.zeros(16)))
        report = check_nonnegativity(sol)
        assert report.status == "pass"
        assert report.extremal_value == 0.0
        assert report.violation == 0.0

    def test_bump_passes_at_roundoff_tolerance(self):
        x = SpaceGrid(-1.0, 1.0, 16).nodes()
        u0 = np.maximum(0.0, 1.0 - 4.0 * x**2)
        sol = solve(small_problem(u0))
        report = check_nonnegativity(sol, tol=1e-12 * np.max(u0))
        assert report.status == "pass"

    def test_hypotheses_violation_is_not_a_failure(self):
        x = SpaceGrid(-1.0, 1.0, 16).nodes()
        u0 = np.maximum(0.0, 1.0 - 4.0 * x**2)
        f = lambda xx, t: np.full_like(xx, -10.0 if t < 0.2 else 0.0)
        sol = solve(small_problem(u0, f=f))
        report = check_nonnegativity(sol)
        assert report.status == "hypotheses-violated"
        assert "negative" in report.detail

    def test_mixed_sign_u0_also_not_applicable(self):
        sol = solve(small_problem(np.linspace(-1, 1, 16)))
        assert check_nonnegativity(sol).status == "hypotheses-violated"


class TestParabolicBoundary:
    def test_nonneg_data_min_on_boundary_at_zero(self):
        x = SpaceGrid(-1.0, 1.0, 16).nodes()
        u0 = np.maximum(0.0, 1.0 - 4.0 * x**2)
        f = lambda xx, t: 0.3 * (1.0 + np.cos(np.pi * xx))
        sol = solve(small_problem(u0, f=f))
        report = check_parabolic_boundary(sol, "min")
        assert report.status == "pass"
        assert report.extremal_value == pytest.approx(0.0, abs=1e-14)
        assert report.location_class in (BoundaryClass.INITIAL, BoundaryClass.LATERAL)

    def test_sign_flipped_mirror(self):
        x = SpaceGrid(-1.0, 1.0, 16).nodes()
        u0 = -np.maximum(0.0, 1.0 - 4.0 * x**2)
        f = lambda xx, t: -0.3 * (1.0 + np.cos(np.pi * xx))
        sol = solve(small_problem(u0, f=f))
        report = check_parabolic_boundary(sol, "max")
        assert report.status == "pass"
        assert report.extremal_value == pytest.approx(0.0, abs=1e-14)

    def test_mixed_sign_initial_data_argmin_never_terminal_interior(self):
        rng = np.random.default_rng(71)
        grid = SpaceGrid(-1.0, 1.0, 24)
        x = grid.nodes()
        for _ in range(25):
            c = rng.uniform(-1, 1, 5)
            u0 = sum(ci * np.sin((k + 1) * np.pi * (x + 1) / 2) for k, ci in enumerate(c))
            d = rng.uniform(0, 1, 3)
            f = lambda xx, t, d=d: sum(
                di * (1.0 + np.sin((k + 1) * np.pi * (xx + 1) / 2) ** 2) for k, di in enumerate(d)
            )
            sol = solve(small_problem(u0, f=f, n=24, M=16))
            report = check_parabolic_boundary(sol, "min")
            assert report.status == "pass"
            assert report.location_class in (BoundaryClass.INITIAL, BoundaryClass.LATERAL)

    def test_wrong_sign_hypothesis_flagged(self):
        sol = solve(small_problem(np.zeros(16), f=lambda x, t: -np.ones_like(x)))
        assert check_parabolic_boundary(sol, "min").status == "hypotheses-violated"
        assert check_parabolic_boundary(sol, "max").status == "pass"

    def test_bad_mode(self):
        sol = solve(small_problem(np.zeros(16)))
        with pytest.raises(ValueError):
            check_parabolic_boundary(sol, "extremum")


class TestRunTrials:
    def _config(self, kind="nonneg", trials=6, seed=7):
        return TrialConfig(
            kind=kind,
            trials=trials,
            seed=seed,
            alphas=(0.3, 0.7),
            betas=(0.4, 0.8),
            grid=SpaceGrid(-1.0, 1.0, 24),
            mesh=TimeMesh(1.0, 16),
        )

    def test_deterministic_for_fixed_seed(self):
        r1 = run_trials(self._config())
        r2 = run_trials(self._config())
        assert r1.to_json_dict() == r2.to_json_dict()

    def test_nonneg_trials_pass(self):
        report = run_trials(self._config(trials=12))
        assert report.status == "pass"
        assert report.trials == 12
        assert len(report.seeds) == 12
        assert report.violation == 0.0

    def test_boundary_trials_pass(self):
        report = run_trials(self._config(kind="boundary-min", trials=8))
        assert report.status == "pass"

    def test_boundary_max_trials_pass(self):
        report = run_trials(self._config(kind="boundary-max", trials=8))
        assert report.status == "pass"

    def test_weak_trials_pass(self):
        report = run_trials(self._config(kind="weak-nonneg", trials=4))
        assert report.status == "pass"

    def test_empty_lattice_rejected(self):
        with pytest.raises(ValueError):
            TrialConfig(
                kind="nonneg",
                trials=1,
                seed=0,
                alphas=(),
                betas=(0.5,),
                grid=SpaceGrid(-1.0, 1.0, 8),
                mesh=TimeMesh(1.0, 4),
            )

    def test_zero_trials_rejected(self):
        with pytest.raises(ValueError):
            TrialConfig(
                kind="nonneg",
                trials=0,
                seed=0,
                alphas=(0.5,),
                betas=(0.5,),
                grid=SpaceGrid(-1.0, 1.0, 8),
                mesh=TimeMesh(1.0, 4),
            )

    def test_json_schema(self):
        report = run_trials(self._config(trials=3))
        data = json.loads(report_to_json(report))
        for key in ("kind", "status", "worst", "location", "trials", "seeds", "lattice"):
            assert key in data
        assert data["trials"] == 3
        assert [0.3, 0.4] in data["lattice"]
