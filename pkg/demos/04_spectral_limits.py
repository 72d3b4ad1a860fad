"""Spectral structure of the walk unitary and the limiting distribution.

The time average of z_v(t) converges to the sum of projector quadratic
forms over the degeneracy classes of U; the pairwise eigenphase spacing
density drives the off-diagonal signal that sets the fluctuation scale.
"""

import numpy as np

from arcwalk import (CoinSpec, assemble_walk_operator, build_ring,
                     dense_unitary, eigendecompose, localized_state)
from arcwalk.qdyn import evolve_record
from arcwalk.spectral import (eigenphase_spacing_density, limiting_distribution,
                              offdiagonal_signal)

g = build_ring(31)
op = assemble_walk_operator(g, CoinSpec.fourier())
sd = eigendecompose(dense_unitary(op))
sizes = sorted(len(c) for c in sd.classes)
print(f"U is {sd.dim}x{sd.dim}; {len(sd.classes)} degeneracy classes, "
      f"sizes {min(sizes)}..{max(sizes)}")

x = localized_state(g, 0)
predicted = limiting_distribution(sd, x, g)
series = evolve_record(op, x, horizon=20_000)
empirical = series.values.mean(axis=0)
print(f"limiting distribution at the start vertex: predicted "
      f"{predicted[0]:.5f}, 2e4-step average {empirical[0]:.5f}")
print(f"max deviation over vertices: {np.abs(predicted - empirical).max():.2e}")

density, edges = eigenphase_spacing_density(sd, bins=16)
print("\npairwise spacing density (integral 1):",
      np.round(density[:8], 3), "...")
print("off-diagonal signal p(t) = sum_{r!=s} e^{it(theta_s-theta_r)}:")
for t in (0, 1, 2, 31):
    print(f"  t={t:2d}: {offdiagonal_signal(sd, t).real:+.2f}"
          + ("  (= M^2 - M)" if t == 0 else ""))
