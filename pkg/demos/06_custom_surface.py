"""User-defined surfaces from declarative text, plus identity checks.

Parses a squashed-torus definition, runs the full coefficient pipeline
on it, and verifies the boundary tensor-trace identities pointwise by
brute-force covariant differentiation.
"""

import math

import numpy as np

from cavityheat import QuadratureSpec, loads_surface
from cavityheat.coefficients import (
    a3_local,
    compute_moments,
    em_coefficients,
    gauss_bonnet_residual,
)
from cavityheat.geometry.identities import curvature_identity_residuals

DEFINITION = """\
schema 1
name squashed-torus
components 1
genera 1

param R 2.0
param r 0.6
param squash 0.8

chart
  domain u 0 2*pi
  domain v 0 2*pi
  periodic u
  periodic v
  x (R + r*cos(u))*cos(v)
  y (R + r*cos(u))*sin(v)
  z squash*r*sin(u)
  normal inward
end
"""

model = loads_surface(DEFINITION)
quad = QuadratureSpec(order=32)
print(f"parsed {model.name!r}: {model.topology.components} component(s), "
      f"genera {model.topology.genera}")

moments = compute_moments(model, quad)
print(f"  area   = {moments.area.value:.8f} (+- {moments.area.error:.1e})")
print(f"  volume = {moments.volume.value:.8f}")

gb = gauss_bonnet_residual(moments, model.topology)
print(f"  total-curvature residual vs declared genus: {gb.value:+.2e}")

coeffs = em_coefficients(moments, model.topology)
print("  electromagnetic coefficients:")
for n, (v, e) in enumerate(zip(coeffs.values, coeffs.errors)):
    print(f"    a{n} = {v:+.8f}  (+- {e:.1e})")
print(f"  a3 local part = {a3_local(moments).value:+.8f}; the genus-1 "
      f"topology term contributes {1 - 0.5 * 2:+.1f}")

print("\nboundary tensor-trace identities at random points:")
rng = np.random.default_rng(42)
worst_name, worst = None, 0.0
for _ in range(6):
    u = rng.uniform(0, 2 * math.pi)
    v = rng.uniform(0, 2 * math.pi)
    res = curvature_identity_residuals(model.charts[0], u, v)
    if res.max_residual > worst:
        worst = res.max_residual
        worst_name = max(res.residuals, key=res.residuals.get)
print(f"  worst residual over 6 points x 17 identities: {worst:.2e} "
      f"({worst_name})")
print("  every projector/boundary-operator trace reduces to the stated "
      "polynomial in L and its covariant derivatives.")
