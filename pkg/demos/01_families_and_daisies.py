"""
Set families and daisies
========================

"""

# r-sets are stored by colex rank in a boolean bitmap
from daisy_turan import SetFamily, colex_rank, colex_unrank
print(colex_rank((0, 1, 3)), colex_unrank(2, 5, 3))

f = SetFamily.complete(6, 3)
print(len(f), "triples on 6 points")

# a daisy: stem P, free set Q, petals are P plus every t-subset of Q
from daisy_turan import DaisyPattern, instantiate, find_daisy, daisy_count
D3 = DaisyPattern.plain(3)
inst = instantiate(D3, (0,), (1, 2, 3, 4))
print(D3.label(), inst.petals)

# the complete family contains plenty of them
print(find_daisy(f, D3))
print(daisy_count(f, D3), "instances inside [6]^(3)")
