"""
Exact ex(n, F) by branch and bound
==================================

"""

from daisy_turan import DaisyPattern, SolverConfig, build_daisy_constraints, solve_max_avoiding
from daisy_turan.search import brute_force_oracle

# ex(n, D_2) is the K4-free edge count
for n in range(4, 10):
    cs = build_daisy_constraints(n, DaisyPattern.plain(2))
    print(n, solve_max_avoiding(cs).objective)

# the 2^20 oracle agrees at n=6 for D_3
cs = build_daisy_constraints(6, DaisyPattern.plain(3))
print(solve_max_avoiding(cs).objective, brute_force_oracle(cs).objective)

# relabelling symmetry and a split frontier; the answer does not move
from daisy_turan.search import relabel_generators
cfg = SolverConfig(symmetry=True, split_depth=2)
res = solve_max_avoiding(build_daisy_constraints(7, DaisyPattern.plain(3)), cfg, relabel_generators(7, 3))
print(res.objective, res.status, res.nodes_explored, "nodes")
