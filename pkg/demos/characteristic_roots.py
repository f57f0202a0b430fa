"""Root chains of the delayed linearization.

For each inside eigenvalue the growth rates solve lambda + mu + mu_m =
sigma e^{-lambda tau}.  Prints the rightmost part of each chain and then
recovers the dominant rate from an actual time series.
"""

import numpy as np

from delayrd.model import ForcingSpec, NonlinearitySpec, ProblemParameters
from delayrd.spectrum import characteristic_roots, dirichlet_eigenvalues, linear_delay_evolve

p = ProblemParameters(mu=2.0, sigma=0.5, tau=1.0, lf=0.0,
                      forcing=ForcingSpec(), nonlinearity=NonlinearitySpec())
K = 3.0

print(f"mu={p.mu:g} sigma={p.sigma:g} tau={p.tau:g}, box (-{K:g}, {K:g})")
for m, eig in enumerate(dirichlet_eigenvalues(K, 3), start=1):
    roots = characteristic_roots(eig, p, 5)
    print(f"\nmode {m} (eigenvalue {eig:.4f}): five rightmost roots")
    for r in roots:
        tag = "real" if r.imag == 0.0 else "pair"
        print(f"  {r.real:12.6f} {r.imag:+12.6f}i   [{tag}]")

# evolve one mode amplitude and read the decay rate off the tail of the log plot
eig = dirichlet_eigenvalues(K, 1)[0]
dominant = characteristic_roots(eig, p, 1)[0]
times, values = linear_delay_evolve(np.ones(257), p, eig, 15.0)
mask = times >= 10.0
slope = np.polyfit(times[mask], np.log(np.abs(values[mask])), 1)[0]
print(f"\ndominant root of mode 1: {dominant.real:.10f}")
print(f"slope of log|a(t)| on t >= 10: {slope:.10f}  "
      f"(difference {abs(slope - dominant.real):.2e})")
