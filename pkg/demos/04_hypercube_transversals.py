"""
Subcube transversals in Q_n
===========================

"""

from fractions import Fraction

from daisy_turan.hypercube import (
    layered_transversal, max_points_in_some_dcube, min_subcube_transversal,
    td_evidence_table, transversal_daisy_correspondence,
)

# exact minimum sets meeting every 2-subcube
for n in (3, 4, 5):
    res = min_subcube_transversal(n, 2)
    print(n, res.objective, Fraction(res.objective, 2**n))

# every third layer is a transversal; a 2-cube holds at most 2 of its points
L = layered_transversal(6, 2, 0)
print(L.size(), max_points_in_some_dcube(L, 2)[0])

# middle 4-cubes of Q_6 against daisies in the middle layer
rep = transversal_daisy_correspondence(6)
print(rep.min_transversal, "+", rep.ex_value, "=", rep.layer_size, rep.ok)

# the table with its bounds
for row in td_evidence_table(1, range(1, 5)):
    print(row.problem, row.n, row.value, row.ratio)
