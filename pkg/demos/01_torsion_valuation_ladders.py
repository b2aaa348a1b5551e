"""Valuation ladders of p-power torsion towers.

The level-1 Newton polygon of the torsion polynomial has interior points
(i, v(c_i)) and the anchor (p, 0); each later level prepends the previous
root valuation at index 0 and scales the interior by p.  Once the interior
clears the chord, every level simply divides the valuation by p.
"""

from fractions import Fraction

from monodromy_lab.formal_groups import valuation_ladder


def show(title, ladder):
    print(title)
    print("  n   v_n      denominator  multiset")
    for level in ladder.levels:
        ms = ", ".join("%s x%d" % (v, m) for v, m in level.multiset)
        print("  %-3d %-8s %-12d {%s}" % (level.n, level.valuation, level.denominator, ms))
    print("  threshold n0 =", ladder.n0)
    print()


# The basic supersingular-reduction shape: v(c_1) = 1, so the first root
# valuation is 1/(p-1) and the tower ramifies by p from level 1 on.
for p in (2, 3, 5):
    show("p = %d, unit slope (m = 1)" % p, valuation_ladder(p, {1: 1}, 5))

# A steeper profile: v(c_1) = 3, v(c_2) = 2 over p = 3.  Level 1 starts at
# 3/2, and the certified regime only begins at level 2: the numerator of
# 3/2 still carries a factor of p, so the denominator stalls once before
# growing by p forever.
show(
    "p = 3, interior profile {1: 3, 2: 2}",
    valuation_ladder(3, {1: Fraction(3), 2: Fraction(2)}, 5),
)
