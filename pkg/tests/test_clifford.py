import random
from fractions import Fraction

import pytest

from monodromy_lab import ComputationError
from monodromy_lab.clifford import (
    CliffordElement,
    GramLattice,
    cocharacter_conjugation_check,
    filtration_type2,
    filtration_type3,
    full_space,
    graded_splitting,
    left_ideal_image,
)


@pytest.fixture(scope="module")
def split2():
    return GramLattice.split(2)


@pytest.fixture(scope="module")
def split3():
    return GramLattice.split(3)


def vectors(lattice, *indices):
    return tuple(lattice.basis_vector(i) for i in indices)


# -- lattice validation ----------------------------------------------------------


def test_signature_rejected_when_wrong():
    with pytest.raises(ComputationError):
        GramLattice([[1, 0, 0], [0, 1, 0], [0, 0, 1]])  # (3, 0)
    with pytest.raises(ComputationError):
        GramLattice([[0, 1, 0], [1, 0, 0], [0, 0, 0]])  # degenerate


def test_standard_lattices_have_right_signature():
    for n in range(2, 6):
        assert GramLattice.split(n).n == n
    for n in range(1, 6):
        assert GramLattice.one_hyperbolic(n).n == n


def test_asymmetric_gram_rejected():
    with pytest.raises(ComputationError):
        GramLattice([[0, 1, 0], [0, 0, 0], [0, 0, -1]])


# -- multiplication ---------------------------------------------------------------


def test_square_is_quadratic_value(split2):
    e3 = split2.basis_vector(2)
    assert (e3 * e3).terms == {}  # q(e3) = 0 in the split lattice
    L = GramLattice.one_hyperbolic(2)
    f = L.basis_vector(2)
    assert (f * f).terms == {(): Fraction(1)}
    g = L.basis_vector(3)
    assert (g * g).terms == {(): Fraction(-1)}


def test_orthogonal_vectors_anticommute():
    L = GramLattice.one_hyperbolic(3)
    a, b = L.basis_vector(2), L.basis_vector(3)
    assert (b * a).terms == {(2, 3): Fraction(-1)}
    assert (a * b + b * a).terms == {}


def test_hyperbolic_pair_sandwich(split2):
    # q(e1) = 0, B(e1, e3) = 1: e1 e3 e1 = 2 e1
    e1, e3 = vectors(split2, 0, 2)
    prod = e1 * e3 * e1
    assert prod.terms == {(0,): Fraction(2)}


def test_parity_multiplicative(split2):
    rng = random.Random(5)
    monos = list(split2.monomials())
    for _ in range(100):
        a = CliffordElement(split2, {rng.choice(monos): Fraction(rng.randrange(1, 5))})
        b = CliffordElement(split2, {rng.choice(monos): Fraction(rng.randrange(1, 5))})
        ab = a * b
        if a and b and ab:
            assert ab.parity() == (a.parity() + b.parity()) % 2


def _random_element(rng, lattice, terms=3):
    monos = list(lattice.monomials())
    out = {}
    for _ in range(terms):
        out[rng.choice(monos)] = Fraction(rng.randrange(-3, 4))
    return CliffordElement(lattice, out)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_associativity_randomised(n):
    lattice = GramLattice.split(n) if n >= 2 else GramLattice.one_hyperbolic(n)
    rng = random.Random(100 + n)
    for _ in range(60):
        a = _random_element(rng, lattice)
        b = _random_element(rng, lattice)
        c = _random_element(rng, lattice)
        assert (a * b) * c == a * (b * c)


def test_vector_square_identity_randomised(split3):
    rng = random.Random(9)
    for _ in range(80):
        coords = [Fraction(rng.randrange(-3, 4)) for _ in range(split3.dim)]
        v = split3.vector(coords)
        sq = v * v
        expected = split3.quadratic(coords)
        assert sq.terms == ({(): expected} if expected else {})


# -- left ideal images -------------------------------------------------------------


def test_unit_generates_everything(split2):
    img = left_ideal_image(split2, split2.one())
    assert img.dim == 1 << split2.dim


def test_isotropic_vector_image_is_half():
    L = GramLattice.one_hyperbolic(1)  # n = 1, dim 3, algebra dim 8
    img = left_ideal_image(L, L.basis_vector(0))
    assert img.dim == 4


def test_isotropic_plane_image_is_quarter():
    L = GramLattice.split(1 + 1) if False else GramLattice.split(2)
    e1, e2 = vectors(L, 0, 1)
    img = left_ideal_image(L, e1 * e2)
    assert img.dim == 4  # 2^n with n = 2


def test_zero_element_rejected(split2):
    with pytest.raises(ComputationError):
        left_ideal_image(split2, CliffordElement(split2, {}))


# -- filtrations --------------------------------------------------------------------


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_type2_dimension_table(n):
    L = GramLattice.split(n)
    e1, e2 = vectors(L, 0, 1)
    f = filtration_type2(L, e1, e2)
    assert f.dims() == (1 << n, 3 * (1 << n), 1 << (n + 2))
    assert f.graded_dims() == (1 << n, 1 << (n + 1), 1 << n)
    # d/2 bookkeeping: d = 2^(n+1), dim W_-2 = d/2
    d = 1 << (n + 1)
    assert f.dims()[0] == d // 2


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_type3_dimension_table(n):
    L = GramLattice.one_hyperbolic(n)
    f = filtration_type3(L, L.basis_vector(0))
    assert f.dims() == (1 << (n + 1), 1 << (n + 1), 1 << (n + 2))
    assert f.graded_dims()[1] == 0


def test_type2_rejects_nonisotropic(split2):
    bad = split2.basis_vector(0) + split2.basis_vector(2)  # q = 2
    with pytest.raises(ComputationError):
        filtration_type2(split2, bad, split2.basis_vector(1))


def test_type2_rejects_dependent_pair(split2):
    e1 = split2.basis_vector(0)
    with pytest.raises(ComputationError):
        filtration_type2(split2, e1, e1.scale(2))


def test_type3_rejects_nonisotropic():
    L = GramLattice.one_hyperbolic(2)
    with pytest.raises(ComputationError):
        filtration_type3(L, L.basis_vector(2))


def test_w1_product_containment(split2):
    # e1 * (e2 * Cl(V)) lands inside im(e1 e2)
    e1, e2 = vectors(split2, 0, 1)
    target = left_ideal_image(split2, e1 * e2)
    image_e2 = left_ideal_image(split2, e2)
    moved = image_e2.left_multiply(e1)
    assert target.contains(moved)


# -- graded splitting -----------------------------------------------------------------


def test_splitting_dims_n2(split2):
    e1, e2, e3, e4 = vectors(split2, 0, 1, 2, 3)
    f = filtration_type2(split2, e1, e2)
    s = graded_splitting(f, e3, e4)
    assert s.dims() == (4, 8, 4)
    assert s.h_minus2.contains(f.w_minus2) and f.w_minus2.contains(s.h_minus2)
    total = s.h_0.add(s.h_minus1).add(s.h_minus2)
    assert total.dim == 16


def test_splitting_dims_n3(split3):
    e1, e2, e3, e4 = vectors(split3, 0, 1, 2, 3)
    f = filtration_type2(split3, e1, e2)
    s = graded_splitting(f, e3, e4)
    assert s.dims() == (8, 16, 8)
    assert len(s.i_0_basis) == 1


def test_splitting_rejects_broken_duality(split2):
    e1, e2, e3, e4 = vectors(split2, 0, 1, 2, 3)
    f = filtration_type2(split2, e1, e2)
    with pytest.raises(ComputationError):
        graded_splitting(f, e4, e3)  # pairings land on the wrong vectors


# -- cocharacter checks ----------------------------------------------------------------


def _standard_splitting(n):
    L = GramLattice.split(n)
    e1, e2, e3, e4 = vectors(L, 0, 1, 2, 3)
    return L, graded_splitting(filtration_type2(L, e1, e2), e3, e4)


def test_cocharacter_lowering(split2):
    _, s = _standard_splitting(2)
    chk = cocharacter_conjugation_check(s, split2.basis_vector(0))
    assert chk.shift == -1
    assert chk.ok


def test_cocharacter_raising(split2):
    _, s = _standard_splitting(2)
    chk = cocharacter_conjugation_check(s, split2.basis_vector(2))
    assert chk.shift == 1
    assert chk.ok


def test_cocharacter_i0_fixes_weights():
    L, s = _standard_splitting(3)
    assert len(s.i_0_basis) == 1
    chk = cocharacter_conjugation_check(s, s.i_0_basis[0])
    assert chk.shift == 0
    assert chk.ok


def test_cocharacter_rejects_mixed_vector(split2):
    _, s = _standard_splitting(2)
    mixed = split2.basis_vector(0) + split2.basis_vector(2)
    with pytest.raises(ComputationError):
        cocharacter_conjugation_check(s, mixed)


def test_full_table_n2():
    _, s = _standard_splitting(2)
    L = s.lattice
    reps = [L.basis_vector(0), L.basis_vector(1), L.basis_vector(2), L.basis_vector(3)]
    for v in reps:
        chk = cocharacter_conjugation_check(s, v)
        assert chk.ok, (v, chk)


# -- isotropic search helper ---------------------------------------------------------


def test_isotropic_search_finds_standard_vectors(split2):
    from monodromy_lab.clifford import search_isotropic_vectors

    found = search_isotropic_vectors(split2, height=1, limit=20)
    assert found
    for v in found:
        coords = v.grade_one_coords()
        assert split2.quadratic(coords) == 0
        assert any(coords)


def test_isotropic_search_height_guard(split2):
    from monodromy_lab.clifford import search_isotropic_vectors

    with pytest.raises(ComputationError):
        search_isotropic_vectors(split2, height=11)
