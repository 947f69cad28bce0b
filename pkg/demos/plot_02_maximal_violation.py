"""
Maximal CHSH violation three ways
=================================

For a two-qubit state the correlation matrix R[j, k] = Tr(rho s_j x s_k)
fixes the largest CHSH value, 2 sqrt(u1 + u2), where u1 and u2 are the two
largest eigenvalues of R^T R. The same number follows in closed form from
the coefficients of the characteristic cubic of R^T R, and a direct search
over measurement directions finds it too.
"""

import numpy as np

from conncorr.correlation import (
    alpha_connected, alpha_quantum, bell_value, chsh_optimize, classify, connected_r_matrix, gram,
    max_violation_eigen, r_matrix,
)
from conncorr.measures import measures_from_params
from conncorr.qmat import charpoly3
from conncorr.states import canonical_state, density, reduce_pair, sample_canonical

p = sample_canonical(2024)
rho12 = reduce_pair(density(canonical_state(p)), "12")
ms = measures_from_params(p, "12")

###############################################################################
# The quantum and the connected correlation matrices. The connected one
# removes the product of the single-qubit Bloch vectors.
for label, r in [("quantum", r_matrix(rho12)), ("connected", connected_r_matrix(rho12))]:
    c = classify(r)
    best, setting = chsh_optimize(r, restarts=10, seed=0)
    print(f"[{label}]")
    print("  alphas (Gram)   ", np.round(charpoly3(gram(r)), 12))
    print("  gamma2, theta   ", round(c.gamma2, 8), round(c.theta, 8))
    print("  closed form     ", c.gamma)
    print("  2 sqrt(u1 + u2) ", max_violation_eigen(r))
    print("  direct search   ", best, "(check:", bell_value(r, setting), ")")

###############################################################################
# The cubic coefficients are polynomials in the measures. The quantum ones
# never involve E4; the connected ones need all five measures.
print("\nalpha_quantum  ", np.round(alpha_quantum(ms), 12))
print("alpha_connected", np.round(alpha_connected(ms), 12))

###############################################################################
# Swapping l1 and l4 leaves E1, E2, E3 and E5 alone but changes E4: the
# quantum violation is unchanged, the connected one moves.
swapped = type(p)(p.l0, p.l4, p.l2, p.l3, p.l1, p.phi)
rho_s = reduce_pair(density(canonical_state(swapped)), "12")
print("\nE4 before / after swap     ", ms.e4, measures_from_params(swapped).e4)
print("quantum gamma before/after ", classify(r_matrix(rho12)).gamma, classify(r_matrix(rho_s)).gamma)
print("connected gamma before/after", classify(connected_r_matrix(rho12)).gamma, classify(connected_r_matrix(rho_s)).gamma)
