"""Recovering heat-trace coefficients from eigenvalue sums.

The independent check of the curvature formulas: sample
K(t) = sum multiplicity * exp(-t lambda) over the exactly enumerated
ball spectrum, fit the half-integer power basis, and compare every
recovered coefficient with its curvature-integral prediction.
"""

from cavityheat import (
    FitConfig,
    QuadratureSpec,
    TopologyInfo,
    dirichlet_modes,
    em_modes,
    fit_coefficients,
    heat_trace_samples,
    neumann_modes,
    sphere,
)
from cavityheat.coefficients import (
    compute_moments,
    em_coefficients,
    form_coefficients,
)
from cavityheat.tables import harmonic_form_dims

moments = compute_moments(sphere(1.0), QuadratureSpec(order=32))
ball = TopologyInfo(1, (0,))
config = FitConfig(t_lo=0.006, t_hi=0.06, n_points=40)

print("== electromagnetic cavity, unit ball, omega_max 60 ==")
em = em_modes(60.0)
samples = heat_trace_samples(em, config.t_grid())
fit = fit_coefficients(samples, config)
target = em_coefficients(moments, ball)
print("      fitted           curvature        |difference|")
for n in range(6):
    print(f"  a{n} {fit.a(n):+.8f}   {target[n]:+.8f}   "
          f"{abs(fit.a(n) - target[n]):.2e}  (+- {fit.stderr((n-3)/2):.1e})")
print(f"  design condition number {fit.condition_number:.2e}, "
      f"window {fit.window}")

print("\n== scalar problems against the coefficient table ==")
# the enumerated lists omit zero modes; the fitted constant therefore
# sits below the tabulated a3 by the number of harmonic forms
for p, modes in ((0, dirichlet_modes(60.0)), (3, neumann_modes(60.0))):
    table = form_coefficients(p, moments)
    dim_h = harmonic_form_dims(ball)[p]
    fitp = fit_coefficients(heat_trace_samples(modes, config.t_grid()), config)
    print(f"  degree {p}:")
    for n in range(4):
        got = fitp.a(n) + (dim_h if n == 3 else 0.0)
        print(f"    a{n} {got:+.8f}  vs table {table[n]:+.8f}  "
              f"off {abs(got - table[n]):.1e}")

print("\nthe electromagnetic a3 = 5/8 carries both curvature and topology;"
      "\nrecovering it spectrally confirms the sign conventions end to end.")
