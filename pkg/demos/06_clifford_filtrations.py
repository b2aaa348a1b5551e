"""Clifford weight filtrations at the boundary.

For a signature-(n, 2) lattice, a 2-dimensional isotropic subspace gives
the type II filtration W_-2 = im(e1 e2) inside W_-1 = im(e1) + im(e2), with
a weight-one graded piece of dimension 2^(n+1); an isotropic line gives the
type III filtration with trivial gr_1.  The dimensions drive the shape of
the uniformizing semi-abelian variety: dim W_-2 = d/2 for d = 2^(n+1).
"""

from monodromy_lab.clifford import (
    GramLattice,
    cocharacter_conjugation_check,
    filtration_type2,
    filtration_type3,
    graded_splitting,
)

print("type II dimension table (W_-2, W_-1, W_0):")
for n in range(2, 6):
    lattice = GramLattice.split(n)
    f = filtration_type2(lattice, lattice.basis_vector(0), lattice.basis_vector(1))
    print("  n=%d: dims %s, graded %s" % (n, f.dims(), f.graded_dims()))

print("\ntype III dimension table:")
for n in range(1, 6):
    lattice = GramLattice.one_hyperbolic(n)
    f = filtration_type3(lattice, lattice.basis_vector(0))
    print("  n=%d: dims %s (gr_1 = %d)" % (n, f.dims(), f.graded_dims()[1]))

print("\ngraded splitting and weight shifts at n = 3:")
lattice = GramLattice.split(3)
e1, e2, e3, e4 = (lattice.basis_vector(i) for i in range(4))
splitting = graded_splitting(filtration_type2(lattice, e1, e2), e3, e4)
print("  splitting dims (H_-2, H_-1, H_0):", splitting.dims())
reps = [("e1 in I_-1", e1), ("orthogonal I_0 vector", splitting.i_0_basis[0]), ("e3 in I_1", e3)]
for label, v in reps:
    chk = cocharacter_conjugation_check(splitting, v)
    print(
        "  %-22s shift %+d, containments ok: %s, parity preserved: %s"
        % (label, chk.shift, all(h for _, h in chk.containments), chk.parity_preserved)
    )
