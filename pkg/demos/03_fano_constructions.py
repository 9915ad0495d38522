"""
Daisy-free constructions
========================

"""

from fractions import Fraction
from math import comb

from daisy_turan import DaisyPattern, is_daisy_free
from daisy_turan.constructions import (
    complete_multipartite, fano_complement, iterated_fano, max_members_in_window, parity_family,
)

D3 = DaisyPattern.plain(3)

# 28 of the 35 triples on 7 points, and no daisy
F = fano_complement()
print(F.size(), Fraction(F.size(), comb(7, 3)), is_daisy_free(F, D3))

# blow it up inside itself: 9800 triples on 49 points (a few seconds)
G = iterated_fano(2)
print(G.size(), Fraction(G.size(), comb(49, 3)), is_daisy_free(G, D3))

# the complete 3-partite family
print(complete_multipartite(9, 3).size())

# parity family: most members any 6 points can hold
P = parity_family(12, 2, 4, 1)
print(P.size(), max_members_in_window(P, 6))
