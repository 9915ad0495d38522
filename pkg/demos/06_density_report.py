"""
Density tables and bounds
=========================

"""

from fractions import Fraction

from daisy_turan import DaisyPattern
from daisy_turan.report import bracket, closed_form_bounds, ex_table, export, format_table, verify_bounds

for p in ("3,4,3", "3,4,1", "3,4,2"):
    print(p, [(b.name, b.value) for b in closed_form_bounds(DaisyPattern.parse(p), 7)])

rows = ex_table(DaisyPattern.plain(3), 5, 7)
print(format_table(rows))
print(len(verify_bounds(rows).checks), "bound checks")

# the best construction next to the smallest exact ratio
print(bracket(rows, Fraction(1, 2)))

print(export(rows, "csv"))
