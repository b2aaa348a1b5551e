import pytest

from monodromy_lab import ComputationError, FiniteField


def test_prime_field_arithmetic():
    F5 = FiniteField(5)
    a = F5.element(2)
    b = F5.element(4)
    assert a + b == F5.element(1)
    assert a * b == F5.element(3)
    assert (a - b) == F5.element(3)
    assert a.inverse() * a == F5.one()


def test_nonprime_characteristic_rejected():
    with pytest.raises(ComputationError):
        FiniteField(6)


def test_reducible_modulus_rejected():
    # u^2 + 1 = (u+1)^2 over F_2
    with pytest.raises(ComputationError):
        FiniteField(2, [1, 0, 1])


def test_f4_multiplication_table():
    # F_4 = F_2[u]/(u^2+u+1)
    F4 = FiniteField(2, [1, 1, 1])
    u = F4.generator()
    assert u * u == u + F4.one()
    assert u ** 3 == F4.one()
    assert u.inverse() == u * u


@pytest.mark.parametrize(
    "field",
    [FiniteField(2), FiniteField(5), FiniteField(2, [1, 1, 1]), FiniteField(3, [1, 0, 1])],
)
def test_qth_power_fixes_everything(field):
    q = field.order
    for x in field.elements():
        assert x ** q == x
        if x:
            assert x * x.inverse() == field.one()


def test_frobenius_inverse_roundtrip():
    F9 = FiniteField(3, [1, 0, 1])  # u^2 + 1 irreducible over F_3
    for x in F9.elements():
        assert x.frobenius_inverse() ** 3 == x
        assert x.frobenius().frobenius_inverse() == x


def test_field_equality_is_structural():
    assert FiniteField(2, [1, 1, 1]) == FiniteField(2, [1, 1, 1])
    assert FiniteField(2) != FiniteField(3)
