"""Partial right products of [[I, B], [0, C]] matrices, computed two ways.

The structured engine tracks only the top-right block X_n and the
bottom-right product Gamma_n; the dense oracle multiplies full matrices.
They agree to rounding, and X_n approaches B (I - C)^{-1} geometrically.
"""

import numpy as np

from blockprod import (
    BlockUpperTriangular,
    ContractionCertificate,
    INF_NORM,
    dense_partial_product,
    explicit_sum,
    initial_state,
    step,
)

a = BlockUpperTriangular(1, [[1.0]], [[0.5]])
cert = ContractionCertificate(INF_NORM, 0.5, "declared")

print("constant factor [[1, 1], [0, 0.5]], limit candidate L = 1/(1-0.5) = 2\n")
print(f"{'n':>3} {'X_n':>12} {'|D_n|':>12} {'bound':>12} {'Gamma_n':>12}")
state = initial_state(1, 1)
for n in range(1, 11):
    state = step(state, a, cert)
    print(
        f"{n:>3} {state.x[0, 0].real:>12.8f} {abs(state.d_dev[0, 0]):>12.2e} "
        f"{state.bound:>12.2e} {state.gamma[0, 0].real:>12.2e}"
    )

dense = dense_partial_product([a] * 10, 10)
print("\ndense oracle P_10:")
print(dense.real)
print("explicit-sum X_10:", explicit_sum([a] * 10, 10)[0, 0].real)
