"""Newton polygons and the Puiseux root oracle.

The polygon reads root valuations off hull slopes; the oracle actually
expands the roots in fractional powers of t and so double-checks every
slope claim independently.
"""

from monodromy_lab import FiniteField, PuiseuxSeries
from monodromy_lab.polynomials import (
    CoefficientSeries,
    newton_polygon,
    puiseux_roots,
    root_valuations,
)

F3 = FiniteField(3)
F5 = FiniteField(5)


def t(field, e=1, c=1):
    return PuiseuxSeries.t_power(field, e, c)


# x^2 - t over F_3: the polygon says two roots of valuation 1/2...
poly = newton_polygon([(0, 1), (2, 0)])
print("x^2 - t polygon vertices:", poly.vertices)
print("root valuations:", root_valuations(poly))

# ...and the oracle produces the actual expansions +-t^(1/2).
f = CoefficientSeries(F3, [-t(F3), PuiseuxSeries.zero(F3), PuiseuxSeries.one(F3)])
for root in puiseux_roots(f, target_precision=4):
    print("root:", root.expansion, " valuation:", root.valuation)
    print("  squared back:", root.expansion * root.expansion)

# A factored product (x - t)(x - t^2) over F_5: valuations {1, 2}.
g = CoefficientSeries(F5, [t(F5, 3), -(t(F5) + t(F5, 2)), PuiseuxSeries.one(F5)])
print("\n(x - t)(x - t^2):")
for root in puiseux_roots(g, target_precision=6):
    print("  valuation %s, expansion %s" % (root.valuation, root.expansion))

# When the residual equation has no root in the residue field the oracle
# reports the exact valuation and multiplicity without an expansion.
h = CoefficientSeries(F3, [t(F3), PuiseuxSeries.zero(F3), PuiseuxSeries.one(F3)])
packet = puiseux_roots(h, target_precision=4)[0]
print("\nx^2 + t over F_3: valuation-only packet:", packet.valuation, "x", packet.multiplicity)
