"""Command-line entry point.

Subcommands: ``solve`` (run the stepper, write solution CSV + metadata
JSON), ``verify`` (property suites on randomized trials plus the
configured profile), ``convergence`` (mesh-refinement studies) and
``kernel-table`` (kernel samples and L1 distances).  One flat JSON config
file drives everything; all validation errors are reported together.

Exit codes: 0 success; 1 = a verification suite found a violation;
2 = usage or config error; 3 = internal numeric error.  No environment
variables, no network: flags and the config file are the whole interface,
so runs are reproducible byte for byte.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import exprparse, fraclap, kernels, principles, solver, timefrac

__all__ = ["RunConfig", "load_config", "main"]

_REQUIRED = {
    "alpha": float,
    "beta": float,
    "a": float,
    "b": float,
    "n": int,
    "T": float,
    "M": int,
    "u0": str,
    "f": str,
}
_OPTIONAL = {
    "m": int,
    "trials": int,
    "seed": int,
    "out": str,
    "m_ladder": str,
}
_DEFAULTS = {"m": 16, "trials": 20, "seed": 0, "out": "out", "m_ladder": "4,16,64,256"}


class ConfigError(ValueError):
    """Config-file problem; message lists every offending key at once."""


@dataclass(frozen=True)
class RunConfig:
    alpha: float
    beta: float
    a: float
    b: float
    n: int
    T: float
    M: int
    u0_src: str
    f_src: str
    u0_expr: exprparse.Expr
    f_expr: exprparse.Expr
    m: int
    trials: int
    seed: int
    out: str
    m_ladder: tuple
    raw: dict

    def grid(self) -> fraclap.SpaceGrid:
        return fraclap.SpaceGrid(self.a, self.b, self.n)

    def mesh(self) -> kernels.TimeMesh:
        return kernels.TimeMesh(self.T, self.M)

    def u0_field(self) -> fraclap.Field:
        vals = _sample_expr(self.u0_expr, self.grid().nodes(), 0.0, "u0")
        return fraclap.Field(self.grid(), vals)

    def forcing(self):
        expr = self.f_expr

        def f(x, t):
            return _sample_expr(expr, x, t, "f")

        return f


def _sample_expr(expr: exprparse.Expr, xs: np.ndarray, t: float, key: str) -> np.ndarray:
    out = np.empty(len(xs))
    for i, x in enumerate(xs):
        v = exprparse.evaluate(expr, float(x), float(t))
        if not np.isfinite(v):
            raise ConfigError(
                f"expression {key!r} evaluates to {v} at (x={float(x)!r}, t={t!r})"
            )
        out[i] = v
    return out


def load_config(path: str | Path) -> RunConfig:
    """Load and validate a flat JSON config; collect all errors before raising."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise ConfigError(f"malformed config {path}: {e}") from e
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object of scalars and strings")

    errors = []
    known = set(_REQUIRED) | set(_OPTIONAL)
    for key in raw:
        if key not in known:
            errors.append(f"unknown key {key!r}")
    vals = {}
    for key, typ in _REQUIRED.items():
        if key not in raw:
            errors.append(f"missing key {key!r}")
            continue
        try:
            vals[key] = _coerce(key, raw[key], typ)
        except ConfigError as e:
            errors.append(str(e))
    for key, typ in _OPTIONAL.items():
        if key in raw:
            try:
                vals[key] = _coerce(key, raw[key], typ)
            except ConfigError as e:
                errors.append(str(e))
        else:
            vals[key] = _DEFAULTS[key]

    def have(*keys):
        return all(k in vals for k in keys)

    if have("alpha") and not 0.0 < vals["alpha"] < 1.0:
        errors.append(f"key 'alpha': must lie in the open interval (0,1), got {vals['alpha']}")
    if have("beta") and not 0.0 < vals["beta"] < 1.0:
        errors.append(f"key 'beta': must lie in the open interval (0,1), got {vals['beta']}")
    if have("a", "b") and not vals["a"] < vals["b"]:
        errors.append(f"keys 'a','b': need a < b, got [{vals['a']}, {vals['b']}]")
    if have("n") and vals["n"] < 1:
        errors.append(f"key 'n': need at least one interior node, got {vals['n']}")
    if have("T") and not vals["T"] > 0:
        errors.append(f"key 'T': must be positive, got {vals['T']}")
    if have("M") and vals["M"] < 1:
        errors.append(f"key 'M': need at least one time step, got {vals['M']}")
    if have("m") and vals["m"] < 1:
        errors.append(f"key 'm': must be a positive integer, got {vals['m']}")
    if have("trials") and vals["trials"] < 1:
        errors.append(f"key 'trials': must be >= 1, got {vals['trials']}")

    exprs = {}
    for key in ("u0", "f"):
        if key not in vals:
            continue
        try:
            exprs[key] = exprparse.parse(vals[key])
        except exprparse.ParseError as e:
            errors.append(f"key {key!r}: {e}")

    ladder = ()
    if "m_ladder" in vals:
        try:
            ladder = tuple(int(s) for s in str(vals["m_ladder"]).split(","))
            if not ladder or any(m < 1 for m in ladder):
                raise ValueError
        except ValueError:
            errors.append(
                f"key 'm_ladder': expected comma-separated positive integers, got {vals['m_ladder']!r}"
            )

    if errors:
        raise ConfigError("invalid config:\n  " + "\n  ".join(errors))
    return RunConfig(
        alpha=vals["alpha"],
        beta=vals["beta"],
        a=vals["a"],
        b=vals["b"],
        n=vals["n"],
        T=vals["T"],
        M=vals["M"],
        u0_src=vals["u0"],
        f_src=vals["f"],
        u0_expr=exprs["u0"],
        f_expr=exprs["f"],
        m=vals["m"],
        trials=vals["trials"],
        seed=vals["seed"],
        out=vals["out"],
        m_ladder=ladder,
        raw=raw,
    )


def _coerce(key, value, typ):
    if typ is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"key {key!r}: expected a number, got {value!r}")
        return float(value)
    if typ is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"key {key!r}: expected an integer, got {value!r}")
        return int(value)
    if not isinstance(value, str):
        raise ConfigError(f"key {key!r}: expected a string, got {value!r}")
    return value


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _outdir(config: RunConfig, override: str | None) -> Path:
    out = Path(override if override is not None else config.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_solve(config: RunConfig, out_override: str | None = None) -> int:
    out = _outdir(config, out_override)
    problem = solver.ProblemSpec(
        solver.FracOrders(config.alpha, config.beta),
        config.grid(),
        config.mesh(),
        config.u0_field(),
        config.forcing(),
    )
    sol = solver.solve(problem)
    (out / "solution.csv").write_text(solver.solution_to_csv(sol))
    meta = solver.solution_metadata(sol, solver.config_hash(config.raw))
    (out / "metadata.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    print(f"solve: wrote {out / 'solution.csv'} and {out / 'metadata.json'}")
    return 0


def _verify_identities(config: RunConfig) -> dict:
    """Randomized convexity-inequality and extremum-sign suites."""
    rng = np.random.default_rng(config.seed)
    mesh = config.mesh()
    tau = mesh.tau
    k = kernels.monotone_regularized_kernel(config.alpha, config.m, mesh)
    failures = 0
    worst = 0.0
    for _ in range(config.trials):
        breaks = np.linspace(0, mesh.M, 8).astype(int)
        u = kernels.TimeSeries(tau, np.interp(np.arange(mesh.M + 1), breaks, rng.uniform(-1, 1, 8)))
        verdicts = timefrac.convex_inequality_check(u, k)
        if not verdicts.all_ok():
            failures += 1
        n0 = int(np.argmax(u.values))
        if n0 >= 1:
            val, ok = timefrac.rl_extremum_sign(u, config.alpha, n0, "max")
            if not ok:
                failures += 1
                worst = max(worst, -val)
        n0 = int(np.argmin(u.values))
        if n0 >= 1:
            val, ok = timefrac.rl_extremum_sign(u, config.alpha, n0, "min")
            if not ok:
                failures += 1
                worst = max(worst, val)
    return {
        "kind": "identities",
        "status": "pass" if failures == 0 else "fail",
        "trials": config.trials,
        "failures": failures,
        "worst": worst,
        "seeds": [config.seed],
        "lattice": [[config.alpha, config.beta]],
    }


def _configured_problem_report(config: RunConfig, suite: str) -> dict | None:
    """Deterministic check of the configured (u0, f) profile, where applicable."""
    problem = solver.ProblemSpec(
        solver.FracOrders(config.alpha, config.beta),
        config.grid(),
        config.mesh(),
        config.u0_field(),
        config.forcing(),
    )
    u0v = problem.u0.values
    fsamp = problem.forcing_samples()
    if suite == "nonneg":
        if np.any(u0v < 0.0) or np.any(fsamp < 0.0):
            raise ConfigError(
                "nonnegativity check demands u0 >= 0 and f >= 0; "
                "the configured expressions sample negative values"
            )
        sol = solver.solve(problem)
        return principles.check_nonnegativity(sol).to_json_dict()
    if suite == "boundary":
        if np.any(fsamp < 0.0):
            raise ConfigError(
                "parabolic-boundary (min) check demands f >= 0; "
                "the configured expression samples negative values"
            )
        sol = solver.solve(problem)
        return principles.check_parabolic_boundary(sol, "min").to_json_dict()
    return None


def cmd_verify(config: RunConfig, suite: str, out_override: str | None = None) -> int:
    out = _outdir(config, out_override)
    suites = ("nonneg", "boundary", "weak", "identities") if suite == "all" else (suite,)
    trial_kind = {"nonneg": "nonneg", "boundary": "boundary-min", "weak": "weak-nonneg"}
    report: dict = {}
    any_fail = False
    for s in suites:
        entry: dict = {}
        configured = _configured_problem_report(config, s)
        if configured is not None:
            entry["configured_profile"] = configured
            any_fail |= configured["status"] != "pass"
        if s == "identities":
            entry["trials"] = _verify_identities(config)
        else:
            tc = principles.TrialConfig(
                kind=trial_kind[s],
                trials=config.trials,
                seed=config.seed,
                alphas=(config.alpha,),
                betas=(config.beta,),
                grid=config.grid(),
                mesh=config.mesh(),
            )
            entry["trials"] = principles.run_trials(tc).to_json_dict()
        any_fail |= entry["trials"]["status"] != "pass"
        report[s] = entry
    report["config_hash"] = solver.config_hash(config.raw)
    (out / "verify_report.json").write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    status = "FAIL" if any_fail else "PASS"
    print(f"verify[{suite}]: {status}; report at {out / 'verify_report.json'}")
    return 1 if any_fail else 0


def _order(errs):
    return [
        float(np.log2(errs[i] / errs[i + 1])) if errs[i + 1] > 0 else float("nan")
        for i in range(len(errs) - 1)
    ]


def cmd_convergence(config: RunConfig, out_override: str | None = None) -> int:
    out = _outdir(config, out_override)
    rows = [("study", "resolution", "error", "observed_order")]

    # Caputo L1 order on u = t^2 against the closed form 2 t^(2-a)/Gamma(3-a).
    from scipy.special import gamma as _gamma

    alpha = config.alpha
    exact = 2.0 / _gamma(3.0 - alpha)
    errs = []
    resol = (256, 512, 1024, 2048)
    for M in resol:
        tau = 1.0 / M
        ts = kernels.TimeSeries(tau, (tau * np.arange(M + 1)) ** 2)
        scheme = timefrac.CaputoScheme.build(alpha, tau, "l1", M)
        errs.append(abs(timefrac.caputo_apply(ts, scheme, M) - exact))
    orders = [float("nan")] + _order(errs)
    for M, e, o in zip(resol, errs, orders):
        rows.append(("caputo-l1", M, e, o))

    # Fractional Laplacian on the Getoor profile over (-1, 1) at the config beta.
    beta = config.beta
    const = float(
        2.0**(2 * beta)
        * _gamma(1 + beta)
        * _gamma((1 + 2 * beta) / 2.0)
        / _gamma(0.5)
    )
    errs = []
    resol_n = (128, 256, 512)
    for n in resol_n:
        grid = fraclap.SpaceGrid(-1.0, 1.0, n)
        A = fraclap.assemble_1d(grid, beta)
        x = grid.nodes()
        u = fraclap.Field(grid, (1.0 - x**2) ** beta)
        Au = fraclap.apply(A, u).values
        errs.append(float(np.max(np.abs(Au[np.abs(x) <= 0.5] - const))))
    orders = [float("nan")] + _order(errs)
    for n, e, o in zip(resol_n, errs, orders):
        rows.append(("getoor", n, e, o))

    # Scalar relaxation vs the Mittag-Leffler oracle.
    errs = []
    resol_m = (256, 512, 1024, 2048)
    exactml = kernels.mittag_leffler(alpha, -1.0)
    grid1 = fraclap.SpaceGrid(-1.0, 1.0, 1)
    lam = fraclap.FracLapMatrix(beta=beta, grid=grid1, entries=np.array([[1.0]]), c=1.0)
    for M in resol_m:
        problem = solver.ProblemSpec(
            solver.FracOrders(alpha, beta),
            grid1,
            kernels.TimeMesh(1.0, M),
            fraclap.Field(grid1, np.array([1.0])),
            lambda x, t: np.zeros_like(x),
        )
        sol = solver.solve(problem, A=lam)
        errs.append(abs(float(sol.states[-1, 0]) - exactml) / abs(exactml))
    orders = [float("nan")] + _order(errs)
    for M, e, o in zip(resol_m, errs, orders):
        rows.append(("mittag-leffler", M, e, o))

    # Mollified weak-residual decay under simultaneous (tau, h) halving.
    errs = []
    levels = ((32, 24), (64, 48), (128, 96))
    for Mt, nx in levels:
        grid = fraclap.SpaceGrid(config.a, config.b, nx)
        mesh = kernels.TimeMesh(config.T, Mt)
        x = grid.nodes()
        mid = 0.5 * (config.a + config.b)
        wid = 0.5 * (config.b - config.a)
        u0 = fraclap.Field(grid, np.maximum(0.0, 1.0 - ((x - mid) / (0.5 * wid)) ** 2))
        problem = solver.ProblemSpec(
            solver.FracOrders(alpha, beta), grid, mesh, u0,
            lambda xx, t: 0.5 * (1.0 + np.cos(np.pi * (xx - mid) / wid)),
        )
        sol = solver.solve(problem)
        psi = fraclap.Field(grid, np.maximum(0.0, 1.0 - ((x - mid) / (0.33 * wid)) ** 2) ** 2)
        errs.append(abs(solver.weak_residual(sol, psi, m=64, n=Mt // 2)))
    orders = [float("nan")] + _order(errs)
    for (Mt, nx), e, o in zip(levels, errs, orders):
        rows.append(("weak-residual", Mt, e, o))

    lines = [",".join(str(c) if isinstance(c, (str, int)) else _fmt(c) for c in row) for row in rows]
    (out / "convergence.csv").write_text("\n".join(lines) + "\n")
    print(f"convergence: wrote {out / 'convergence.csv'}")
    return 0


def cmd_kernel_table(config: RunConfig, out_override: str | None = None) -> int:
    out = _outdir(config, out_override)
    mesh = config.mesh()
    times = mesh.times()
    alpha = config.alpha
    ladder = config.m_ladder
    cols = {"t": times}
    graw = np.empty_like(times)
    graw[0] = np.inf
    graw[1:] = kernels.g_kernel(1.0 - alpha, times[1:])
    cols["g"] = graw
    for m in ladder:
        cols[f"h_m{m}"] = kernels.h_kernel(m, times)
        cols[f"greg_m{m}"] = kernels.regularized_kernel(alpha, m, mesh).values
    header = ",".join(cols)
    lines = [header]
    for i in range(len(times)):
        lines.append(",".join(_fmt(float(cols[c][i])) for c in cols))
    (out / "kernel_table.csv").write_text("\n".join(lines) + "\n")

    # L1 distances ||greg_m - g|| on [0, T] via fine-mesh quadrature.
    fine = kernels.TimeMesh(config.T, 8192)
    dlines = ["m,l1_distance"]
    for m in ladder:
        dlines.append(f"{m},{_fmt(_l1_distance(alpha, m, fine))}")
    (out / "kernel_distances.csv").write_text("\n".join(dlines) + "\n")
    print(f"kernel-table: wrote {out / 'kernel_table.csv'} and {out / 'kernel_distances.csv'}")
    return 0


def _l1_distance(alpha: float, m: int, fine: kernels.TimeMesh) -> float:
    """||greg_m - g_{1-alpha}||_L1 with the singular first cell handled exactly."""
    tau = fine.tau
    greg = kernels.regularized_kernel(alpha, m, fine).values
    t = fine.times()
    g = kernels.g_kernel(1.0 - alpha, t[1:])
    body = tau * float(np.sum(np.abs(g - greg[1:])))
    # First cell: g mass is exact, the regularized kernel's is below it.
    head = kernels.g_cell_integral(1.0 - alpha, 0.0, tau) - 0.5 * tau * greg[1]
    return body + abs(head)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="tsfrac",
        description="Time-space fractional diffusion solver and maximum-principle verifier",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("solve", "verify", "convergence", "kernel-table"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="path to the JSON config file")
        p.add_argument("--out", default=None, help="output directory (overrides config)")
        if name == "verify":
            p.add_argument(
                "--suite",
                default="all",
                choices=("nonneg", "boundary", "weak", "identities", "all"),
            )
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        config = load_config(args.config)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    try:
        if args.command == "solve":
            return cmd_solve(config, args.out)
        if args.command == "verify":
            return cmd_verify(config, args.suite, args.out)
        if args.command == "convergence":
            return cmd_convergence(config, args.out)
        return cmd_kernel_table(config, args.out)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError) as e:
        print(f"internal numeric error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
