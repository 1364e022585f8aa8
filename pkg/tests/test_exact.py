from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbitsym.errors import BadGaloisExponent, BadParameter, DimensionMismatch, SchemaError
from orbitsym.exact import (
    Cyclo,
    RationalMatrix,
    cyclo_from_json,
    cyclo_sort_key,
    cyclo_to_json,
    cyclotomic_polynomial,
    mat_inverse,
    mat_kernel,
    mat_rank,
    mat_solve,
    mat_solve_mat,
)

# Coefficient tables computed by hand (ascending degree).
PHI_TABLE = {
    1: (-1, 1),
    2: (1, 1),
    3: (1, 1, 1),
    4: (1, 0, 1),
    5: (1, 1, 1, 1, 1),
    6: (1, -1, 1),
    8: (1, 0, 0, 0, 1),
    9: (1, 0, 0, 1, 0, 0, 1),
    10: (1, -1, 1, -1, 1),
    12: (1, 0, -1, 0, 1),
}


@pytest.mark.parametrize("n,expected", sorted(PHI_TABLE.items()))
def test_cyclotomic_polynomial_small(n, expected):
    assert cyclotomic_polynomial(n) == expected


def test_cyclotomic_polynomial_105_has_coefficient_minus_two():
    # Smallest index where a coefficient other than 0, 1, -1 appears.
    phi = cyclotomic_polynomial(105)
    assert phi[7] == -2
    assert len(phi) == 49


def test_cyclotomic_polynomial_rejects_nonpositive():
    with pytest.raises(BadParameter):
        cyclotomic_polynomial(0)


def test_zeta_of_low_order_is_rational():
    assert Cyclo.zeta(1) == 1
    assert Cyclo.zeta(2) == -1
    assert Cyclo.zeta(4, 2) == -1
    assert Cyclo.zeta(4, 0) == 1


def test_minimal_conductor_is_never_2_mod_4():
    z6 = Cyclo.zeta(6)
    assert z6.conductor == 3
    # zeta_6 = 1 + zeta_3
    assert z6 == Cyclo.from_terms(3, {0: 1, 1: 1})
    assert Cyclo.zeta(10).conductor == 5
    assert Cyclo.zeta(12).conductor == 12


def test_products_drop_to_smaller_conductors():
    z8 = Cyclo.zeta(8)
    assert (z8 * z8).conductor == 4
    assert z8 * z8 == Cyclo.zeta(4)
    assert Cyclo.zeta(12, 3) == Cyclo.zeta(4)


def test_sqrt2_squares_to_two():
    r = Cyclo.zeta(8) + Cyclo.zeta(8, -1)
    assert r.conductor == 8
    assert r * r == 2


def test_golden_ratio_relation():
    x = Cyclo.zeta(5) + Cyclo.zeta(5, 4)
    assert x * x + x - 1 == 0


def test_galois_orbit_sum_of_zeta5():
    total = sum((Cyclo.zeta(5).galois(k) for k in range(1, 5)), Cyclo.rational(0))
    assert total == -1


def test_conjugation():
    z5 = Cyclo.zeta(5)
    assert z5.conj() == Cyclo.zeta(5, 4)
    assert (z5 * z5.conj()) == 1
    assert Cyclo.rational(Fraction(2, 3)).conj() == Fraction(2, 3)


def test_galois_rejects_noncoprime_exponent():
    with pytest.raises(BadGaloisExponent):
        Cyclo.zeta(4).galois(2)


def test_inverse():
    i = Cyclo.zeta(4)
    assert i.inverse() == Cyclo.zeta(4, 3)
    x = 1 + Cyclo.zeta(3)
    assert x * x.inverse() == 1


def test_power():
    assert Cyclo.zeta(8) ** 8 == 1
    assert Cyclo.zeta(8) ** -1 == Cyclo.zeta(8, 7)
    assert Cyclo.rational(3) ** 0 == 1


def test_rational_value():
    assert Cyclo.rational(Fraction(3, 4)).rational_value() == Fraction(3, 4)
    with pytest.raises(BadParameter):
        Cyclo.zeta(3).rational_value()


def test_hash_consistent_with_rational_equality():
    assert hash(Cyclo.rational(3)) == hash(3)
    d = {Cyclo.rational(2): "a", Cyclo.zeta(3): "b"}
    assert d[Cyclo.rational(2)] == "a"


def test_sort_key_orders_deterministically():
    vals = [Cyclo.zeta(3), Cyclo.rational(5), Cyclo.rational(-1), Cyclo.zeta(4)]
    ordered = sorted(vals, key=cyclo_sort_key)
    assert ordered[0] == -1
    assert ordered[1] == 5
    assert [c.conductor for c in ordered] == [1, 1, 3, 4]


def test_json_round_trip_examples():
    vals = [
        Cyclo.rational(0),
        Cyclo.rational(Fraction(-7, 3)),
        Cyclo.zeta(8) + Cyclo.zeta(8, -1),
        Cyclo.from_terms(12, {1: Fraction(1, 2), 7: -2}),
    ]
    for v in vals:
        blob = cyclo_to_json(v)
        assert cyclo_from_json(blob) == v


def test_json_rejects_malformed_input():
    with pytest.raises(SchemaError):
        cyclo_from_json({"conductor": 0, "coeffs": []}, "/x")
    with pytest.raises(SchemaError):
        cyclo_from_json({"conductor": 3, "coeffs": [[1, "a/b"]]}, "/x")
    with pytest.raises(SchemaError):
        cyclo_from_json([1, 2], "/x")


CONDUCTORS = [1, 3, 4, 5, 7, 8, 9, 12]


@st.composite
def cyclos(draw):
    n = draw(st.sampled_from(CONDUCTORS))
    nterms = draw(st.integers(0, 3))
    terms = [
        (draw(st.integers(0, n - 1)), draw(st.integers(-3, 3)))
        for _ in range(nterms)
    ]
    return Cyclo.from_terms(n, terms)


@settings(max_examples=60, deadline=None)
@given(cyclos(), cyclos())
def test_ring_commutativity(x, y):
    assert x + y == y + x
    assert x * y == y * x


@settings(max_examples=40, deadline=None)
@given(cyclos(), cyclos(), cyclos())
def test_ring_associativity_and_distribution(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z


@settings(max_examples=60, deadline=None)
@given(cyclos(), cyclos())
def test_conjugation_is_a_ring_map(x, y):
    assert (x + y).conj() == x.conj() + y.conj()
    assert (x * y).conj() == x.conj() * y.conj()
    assert x.conj().conj() == x


@settings(max_examples=60, deadline=None)
@given(cyclos(), cyclos())
def test_complex_embedding_matches(x, y):
    # Independent floating-point check of the exact ring operations.
    assert abs((x * y).to_complex() - x.to_complex() * y.to_complex()) < 1e-6
    assert abs((x + y).to_complex() - (x.to_complex() + y.to_complex())) < 1e-6


@settings(max_examples=60, deadline=None)
@given(cyclos())
def test_json_round_trip_property(x):
    assert cyclo_from_json(cyclo_to_json(x)) == x


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_galois_composition(data):
    x = data.draw(cyclos())
    n = x.conductor
    units = [k for k in range(1, n + 1) if _coprime(k, n)]
    k = data.draw(st.sampled_from(units))
    l = data.draw(st.sampled_from(units))
    assert x.galois(k).galois(l) == x.galois(k * l)


def _coprime(a, b):
    from math import gcd

    return gcd(a, b) == 1


# ---------------------------------------------------------------------------
# Rational matrices.


def test_matrix_basics():
    a = RationalMatrix.from_rows([[1, 2], [3, 4]])
    assert mat_rank(a) == 2
    assert mat_solve(a, [5, 11]) == (Fraction(1), Fraction(2))
    inv = mat_inverse(a)
    assert inv.entries == (
        (Fraction(-2), Fraction(1)),
        (Fraction(3, 2), Fraction(-1, 2)),
    )
    assert (a * inv).entries == RationalMatrix.identity(2).entries
    assert mat_kernel(a) == ()


def test_matrix_kernel_canonical_form():
    b = RationalMatrix.from_rows([[1, 2, 3], [2, 4, 6]])
    assert mat_rank(b) == 1
    assert mat_kernel(b) == (
        (Fraction(-2), Fraction(1), Fraction(0)),
        (Fraction(-3), Fraction(0), Fraction(1)),
    )


def test_matrix_singular_and_inconsistent():
    s = RationalMatrix.from_rows([[1, 1], [1, 1]])
    assert mat_inverse(s) is None
    assert mat_solve(s, [1, 2]) is None
    assert mat_solve(s, [1, 1]) == (Fraction(1), Fraction(0))


def test_matrix_solve_matrix_rhs():
    a = RationalMatrix.from_rows([[1, 2], [3, 4]])
    x = mat_solve_mat(a, RationalMatrix.identity(2))
    assert x.entries == mat_inverse(a).entries
    s = RationalMatrix.from_rows([[1, 1], [1, 1]])
    assert mat_solve_mat(s, RationalMatrix.identity(2)) is None


def test_matrix_dimension_errors():
    a = RationalMatrix.from_rows([[1, 2]])
    with pytest.raises(DimensionMismatch):
        a * a
    with pytest.raises(DimensionMismatch):
        a.apply([1, 2, 3])
    with pytest.raises(DimensionMismatch):
        RationalMatrix.from_rows([[1, 2], [3]])


def test_matrix_apply_and_trace():
    a = RationalMatrix.from_rows([[0, 1], [1, 0]])
    assert a.apply([3, 5]) == (Fraction(5), Fraction(3))
    assert a.trace() == 0
    assert RationalMatrix.identity(3).trace() == 3


@settings(max_examples=40, deadline=None)
@given(
    st.lists(
        st.lists(st.integers(-4, 4), min_size=3, max_size=3),
        min_size=2,
        max_size=4,
    )
)
def test_matrix_rank_kernel_dimension(rows):
    a = RationalMatrix.from_rows(rows)
    kern = mat_kernel(a)
    assert mat_rank(a) + len(kern) == a.cols
    for v in kern:
        assert a.apply(v) == (Fraction(0),) * a.rows
