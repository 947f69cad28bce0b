"""
A hidden-variable model for a correlator
========================================

Diagonalizing a correlation matrix as R = U diag(q) V^T and setting
k_j = (1 - q_j) / (2 q_j), the vector observable
F(v, lambda) = (lambda^k_j v~_j) with lambda uniform on [0, 1] reproduces
a^T R b as the integral of F(a) . F(b). Spin outcomes are drawn from a
table built out of single-component factors, and a Monte Carlo estimate
converges to the correlator.
"""

import numpy as np
from scipy import integrate

from conncorr.correlation import connected_r_matrix
from conncorr.lhv import (
    build_model, correlator_closed, f_observable, joint_distribution, k_distribution, mc_correlator,
)
from conncorr.states import canonical_state, density, reduce_pair, sample_canonical

rho = reduce_pair(density(canonical_state(sample_canonical(11))), "13")
r = connected_r_matrix(rho)
model = build_model(r)
print("q =", model.q, " k =", model.k)

a = np.array([0.0, 0.6, 0.8])
b = np.array([1.0, 0.0, 0.0])

###############################################################################
# Closed form, the matrix itself and the lambda integral agree.
val, _ = integrate.quad(lambda lam: f_observable(model, a, lam, "a") @ f_observable(model, b, lam, "b"), 0, 1)
print("a^T R b      ", a @ r @ b)
print("sum q a~ b~  ", correlator_closed(model, a, b))
print("integral F.F ", val)

###############################################################################
# The outcome table at one lambda. Single factors can be negative; the
# combined table is flagged when it is.
d = joint_distribution(model, a, b, 0.3)
print("\nP(S_a, S_b | lambda = 0.3) =", np.round(d.p, 6), "signed:", d.signed, "sum:", d.p.sum())

###############################################################################
# Monte Carlo over lambda and outcomes.
est, err, signed = mc_correlator(model, a, b, 10**6, seed=1)
print(f"MC estimate {est:.5f} +- {err:.5f}  (signed tables in {signed:.1%} of draws)")

###############################################################################
# The component weights P(k | a, b, lambda): each P_k(+) + P_k(-) is
# sqrt(3)/3 whatever the setting, so the weights come out uniform.
for setting in [(a, b), (b, a), (np.array([0, 0, 1.0]), np.array([0, 1.0, 0]))]:
    print("P(k | a, b, 0.5) =", k_distribution(model, *setting, 0.5))
