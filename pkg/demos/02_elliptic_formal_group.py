"""End-to-end walkthrough on y^2 + t*xy + y = x^3 over F_2((t)).

The curve is ordinary over the Laurent field but reduces to the
supersingular curve y^2 + y = x^3 at t = 0.  We expand its formal group,
decompose multiplication by 2, build the torsion valuation ladder, and
cross-check two levels against actual Puiseux roots.
"""

from monodromy_lab import FiniteField, PuiseuxSeries
from monodromy_lab.formal_groups import (
    WeierstrassModel,
    ec_formal_group,
    p_decomposition,
    verify_ladder,
)

F2 = FiniteField(2)
t = PuiseuxSeries.t_power(F2, 1)

model = WeierstrassModel.from_ints(F2, a1=t, a3=1)
print("discriminant:", model.discriminant())

fgl = ec_formal_group(model)
print("group law known to total degree", fgl.x_trunc)
print("coefficient of z1*z2 (this is -a1):", fgl.coefficient(1, 1))

double = fgl.mult_by_int(2)
print("[2](x) =", double)

h2 = p_decomposition(fgl)
print("distinguished factor h(u) =", h2.distinguished)
print("m = v(c_1) =", h2.m)

ladder = h2.ladder(4)
print("ladder valuations:", ladder.valuations(), " n0 =", ladder.n0)

report = verify_ladder(fgl, ladder, levels=2)
for n, multiset in enumerate(report.multisets, start=1):
    print("level %d oracle root valuations:" % n, dict(multiset))
