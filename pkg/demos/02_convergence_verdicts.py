"""Convergence verdicts: the right product converges exactly when the limit
candidates B_n (I - C_n)^{-1} settle down.

Three presentations of the same flavor: a convergent singleton cycle, a
divergent alternating cycle (with its two accumulation points), and a cycle
whose two distinct members happen to share one limit candidate.
"""

from blockprod import BlockUpperTriangular, Periodic, analyze

a1 = BlockUpperTriangular(1, [[1.0]], [[0.5]])   # L = 2
a2 = BlockUpperTriangular(1, [[2.0]], [[0.5]])   # L = 4
a3 = BlockUpperTriangular(1, [[1.5]], [[0.25]])  # L = 2 again

for name, cycle in [
    ("singleton", (a1,)),
    ("alternating, different candidates", (a1, a2)),
    ("alternating, matching candidates", (a1, a3)),
]:
    report = analyze(Periodic(cycle))
    print(f"{name}: {report.verdict.value}")
    if report.limit is not None:
        print("  limit:")
        for row in report.limit.real:
            print("   ", row)
    if report.witness is not None:
        pts = sorted(float(p[0, 0].real) for p in report.witness.points)
        print(f"  accumulation points of X_n: {pts}")
    print()
