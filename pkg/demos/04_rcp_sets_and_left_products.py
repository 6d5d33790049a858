"""RCP certification for finite sets, and the contrast with left products.

A set of [[I, B], [0, C]] matrices with uniformly contracting C-blocks has
every infinite *right* product convergent only under a stringent condition:
all members must share the same B (I - C)^{-1}.  Left products, by
contrast, always converge for bounded B.
"""

from blockprod import (
    BlockUpperTriangular,
    certify_rcp,
    left_product_init,
    left_product_step,
)

a1 = BlockUpperTriangular(1, [[1.0]], [[0.5]])
a2 = BlockUpperTriangular(1, [[2.0]], [[0.5]])
a3 = BlockUpperTriangular(1, [[1.5]], [[0.25]])

for name, sigma in [("{a1, a3}", [a1, a3]), ("{a1, a2}", [a1, a2])]:
    verdict = certify_rcp(sigma)
    print(f"{name}: {'RCP' if verdict.is_rcp else 'NOT_RCP'}")
    if verdict.is_rcp:
        print("  every right product converges to:")
        for row in verdict.limit.real:
            print("   ", row)
    else:
        i, j = verdict.violating_pair
        print(f"  candidates differ: L{i} = {verdict.l_values[i][0, 0].real}, "
              f"L{j} = {verdict.l_values[j][0, 0].real}")
        pts = sorted(float(p[0, 0].real) for p in verdict.witness.points)
        print(f"  alternating product accumulates at {pts}")
    print()

# left products from the NOT_RCP set still converge
import itertools

state = left_product_init(1, 1)
for n, pick in enumerate(itertools.cycle([a1, a2])):
    state = left_product_step(state, pick)
    if n == 200:
        break
print(f"left product of the NOT_RCP set after 200 factors: Z = {state[0][0, 0].real}")
