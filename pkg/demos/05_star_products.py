"""
Star products and generic forbidden copies
==========================================

"""

from daisy_turan import DaisyPattern, solve_max_avoiding
from daisy_turan.products import UniformHypergraph, daisy_hypergraph, enumerate_copies, power, star_product
from daisy_turan.search import build_daisy_constraints

K3 = UniformHypergraph.complete(3, 2)
P = star_product(K3, K3)
print(P.m, P.u, len(P))
print(len(power(K3, 3)))

# forbidding the product itself
print(solve_max_avoiding(enumerate_copies(P, 7)).objective)

# the generic copy generator matches the daisy generator
H = daisy_hypergraph(DaisyPattern.plain(3))
print(enumerate_copies(H, 6).constraint_set() == build_daisy_constraints(6, DaisyPattern.plain(3)).constraint_set())
