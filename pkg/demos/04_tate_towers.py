"""Torsion towers of torus quotients.

For a variety uniformized as G_m^g modulo a multiplicative period lattice,
p-power torsion comes from p-power roots of the periods: the extensions are
purely inseparable, the separable degree stays 1, and the Galois image is
trivial.
"""

from monodromy_lab import FiniteField, PuiseuxSeries
from monodromy_lab.monodromy import TateLattice, tate_torsion_tower

F2 = FiniteField(2)
t = PuiseuxSeries.t_power(F2, 1)
one_plus_t = PuiseuxSeries.from_terms(F2, {0: 1, 1: 1})

lattice = TateLattice(periods=(t, t ** 3 * one_plus_t), p=2)
print("period valuations:", lattice.valuation_vector())

for n in range(4):
    tower = tate_torsion_tower(lattice, n)
    print(
        "level %d: separable degree %d, inseparable degree %d"
        % (n, tower.separable_degree, tower.inseparable_degree)
    )
    for i, gen in enumerate(tower.generators, start=1):
        print("   q_%d^(1/%d) = %s" % (i, 2 ** n, gen))
