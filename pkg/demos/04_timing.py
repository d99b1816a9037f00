"""
Run time of the two allocators
==============================

Monte-Carlo bisection pays for K eigendecompositions at every step, so its
run time grows with the array size. The asymptotic allocator evaluates a
closed form and does the same amount of work for every N.
"""

from mmnoma.bench import time_methods

rows = time_methods([8, 16, 32, 64, 128, 256], repetitions=3)
print(f"{'method':24s} {'N':>5s} {'bisections':>10s} {'median time [s]':>16s}")
for r in rows:
    print(f"{r.method:24s} {int(r.axis_value):5d} {r.iterations:10d} {r.wall_time:16.5f}")
