"""Discrete time-fractional calculus: weights, identities, inequalities.

Three layers of structure, each checked numerically below:

* the L1 and Grunwald-Letnikov weight tables agree on smooth signals;
* the convolution-derivative product identity holds with a residual that
  vanishes under refinement (and exactly, for linear probes);
* at a discrete global maximum the fractional derivative of u - u(0) is
  nonnegative, and the convex-part inequalities hold exactly for any
  nonnegative nonincreasing kernel.
"""

import numpy as np

from tsfrac import CaputoScheme, ConvexProbe, caputo_apply, convex_inequality_check, rl_extremum_sign
from tsfrac.kernels import TimeMesh, TimeSeries, monotone_regularized_kernel, regularized_kernel
from tsfrac.timefrac import fundamental_identity_residual

alpha = 0.5
M = 2048
tau = 1.0 / M
t = tau * np.arange(M + 1)

print("derivative of t^2 at t = 1, order 1/2 (exact 1.50450555...):")
u = TimeSeries(tau, t**2)
for kind in ("l1", "gl"):
    scheme = CaputoScheme.build(alpha, tau, kind, M)
    print(f"  {kind}: {caputo_apply(u, scheme, M):.6f}")

print("\nproduct-identity residual for u(t) = t, quadratic probe, k mollified (m=16):")
probe = ConvexProbe(H=lambda y: 0.5 * y**2, dH=lambda y: y)
for Mk in (256, 1024, 4096):
    tk = (1.0 / Mk) * np.arange(Mk + 2)
    mesh = TimeMesh(tk[-1], Mk + 1)
    k = regularized_kernel(alpha, 16, mesh)
    r = fundamental_identity_residual(TimeSeries(tk[1], tk), probe, k, Mk)
    print(f"  M = {Mk:5d}: residual at t = 1 is {r:+.3e}")

print("\nextremum sign check on u = t(2-t) over [0, 2]:")
M2 = 512
tau2 = 2.0 / M2
u2 = TimeSeries(tau2, (tau2 * np.arange(M2 + 1)) * (2.0 - tau2 * np.arange(M2 + 1)))
n0 = int(np.argmax(u2.values))
val, ok = rl_extremum_sign(u2, alpha, n0, "max")
print(f"  derivative at the max: {val:+.4f} (>= 0: {ok})")

print("\nconvex-part inequalities on 50 random trajectories, monotone kernel m = 8:")
mesh = TimeMesh(1.0, 128)
k = monotone_regularized_kernel(alpha, 8, mesh)
rng = np.random.default_rng(0)
all_ok = True
for _ in range(50):
    breaks = np.linspace(0, 128, 8).astype(int)
    traj = TimeSeries(mesh.tau, np.interp(np.arange(129), breaks, rng.uniform(-1, 1, 8)))
    all_ok &= convex_inequality_check(traj, k).all_ok()
print(f"  all verdicts pass at 1e-10 relative tolerance: {all_ok}")
