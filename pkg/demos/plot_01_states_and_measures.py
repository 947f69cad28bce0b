"""
Canonical three-qubit states and their five measures
=====================================================

Every pure three-qubit state can be brought by local unitaries to

    l0|000> + l1 e^{i phi}|100> + l2|101> + l3|110> + l4|111>

and five numbers E1..E5 built from the amplitudes describe its
entanglement. This script builds a few states, computes the measures from
the amplitudes and again from density matrices, and checks them against
each other.
"""

import numpy as np

from conncorr.measures import (
    E5_MATRIX_OFFSET, concurrences, e5_matrix, measures_from_concurrences, measures_from_params,
    measures_from_state, negativity, wootters_concurrence,
)
from conncorr.states import CanonicalParams, canonical_state, density, reduce_pair, reduce_single, sample_canonical

###############################################################################
# GHZ carries only the three-tangle E4; Bell x |0> only the 1|2 concurrence E1.
s = 1 / np.sqrt(2)
for name, p in [("GHZ", CanonicalParams(s, 0, 0, 0, s)), ("Bell x |0>", CanonicalParams(s, 0, 0, s, 0))]:
    print(f"{name:<11}", np.round(measures_from_params(p).as_tuple(), 12))

###############################################################################
# A random state. E1, E2, E3 are the two-qubit concurrences of rho12, rho13
# and rho23, so Wootters' formula on the reduced matrices reproduces them.
p = sample_canonical(7)
ms = measures_from_params(p)
rho = density(canonical_state(p))
print("\nrandom state", p)
print("E from amplitudes   ", np.round(ms.as_tuple(), 10))
print("Wootters 12, 13, 23 ", np.round([wootters_concurrence(reduce_pair(rho, k)) for k in ("12", "13", "23")], 10))

###############################################################################
# The same E2, E3, E4 follow from the purity-based concurrences of the pure
# parent together with E1.
cs = concurrences(canonical_state(p))
print("E2, E3, E4 via C's  ", np.round(measures_from_concurrences(cs, ms.e1), 10))

###############################################################################
# E5 from reduced density matrices. The trace expression is the same for all
# three pairs, and sits exactly 1/3 above the amplitude form.
r1, r2, r3 = (reduce_single(rho, q) for q in (1, 2, 3))
forms = [
    e5_matrix(reduce_pair(rho, "12"), r1, r2, ms),
    e5_matrix(reduce_pair(rho, "23"), r2, r3, ms),
    e5_matrix(reduce_pair(rho, "13"), r1, r3, ms),
]
print("E5 trace forms      ", np.round(forms, 12), " amplitude form", round(ms.e5, 12))
print("offset              ", np.round(np.array(forms) - ms.e5, 12), "=", E5_MATRIX_OFFSET)

###############################################################################
# Any state vector works, not just canonical ones: here a W state.
w = np.zeros(8)
w[[1, 2, 4]] = 1 / np.sqrt(3)
print("\nW state             ", np.round(measures_from_state(w).as_tuple(), 8))

###############################################################################
# Negativity of the partial transpose and the logarithmic negativity.
res = negativity(reduce_pair(rho, "12"))
print("rho12 negativity    ", res.negativity, " E_N =", res.log_negativity)
