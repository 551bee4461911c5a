import json

import pytest
import sympy
from hypothesis import given, settings

from gbgw.cutjoin import (
    TauSeries,
    apply_cut_and_join,
    b_polynomial,
    divisible_by_b,
    max_b_divisor,
    parse_nu,
    tau_expansion,
)
from gbgw.exactalg import NU, DomainError, TimesPolynomial, UPoly, mpq, t

from conftest import homogeneous_polynomials, sympy_cut_and_join, times_polynomials, to_sympy


def test_cut_and_join_of_one():
    assert apply_cut_and_join(TimesPolynomial.one()) == TimesPolynomial.from_nu_poly(b_polynomial(1), (1,)).scale(mpq(1, 16))


def test_cut_and_join_examples():
    assert apply_cut_and_join(t(3)) == (t(1) * t(3)).scale(mpq(49, 16)) - (NU * t(1) * t(3)).scale(mpq(1, 4))
    expected = t(1, 3).scale(mpq(17, 16)) - (NU * t(1, 3)).scale(mpq(1, 4)) + t(3).scale(mpq(3, 2))
    assert apply_cut_and_join(t(1, 2)) == expected


@given(times_polynomials(max_index=9))
@settings(max_examples=40, deadline=None)
def test_cut_and_join_matches_sympy_oracle(p):
    assert sympy.expand(to_sympy(apply_cut_and_join(p)) - sympy_cut_and_join(to_sympy(p))) == 0


@given(homogeneous_polynomials())
@settings(max_examples=40, deadline=None)
def test_degree_raising(pk):
    k, p = pk
    if p:
        assert apply_cut_and_join(p).weighted_degree() == k + 1


def test_tau_matches_sympy_oracle():
    expr = sympy.Integer(1)
    tau = tau_expansion(6)
    for k in range(1, 7):
        expr = sympy.expand(sympy_cut_and_join(expr) / k)
        assert sympy.expand(to_sympy(tau[k]) - expr) == 0


def test_tau_low_orders():
    tau = tau_expansion(3)
    assert tau[0] == TimesPolynomial.one()
    assert tau[1] == t(1).scale(mpq(1, 16)) - (NU * t(1)).scale(mpq(1, 4))
    # one more step by hand: B_2/2^9 t_1^2
    assert tau[2] == TimesPolynomial.from_nu_poly(b_polynomial(2), (2,)).scale(mpq(1, 2 ** 9))
    bracket = t(3).scale(24) + t(1, 3).scale(17) - (NU * t(1, 3)).scale(4)
    assert tau[3] == (bracket * b_polynomial(2)).scale(mpq(1, 2 ** 12 * 6))


def test_numeric_nu_is_substitution():
    assert tau_expansion(2, "25/4")[2] == t(1, 2).scale(mpq(3, 4))
    sym = tau_expansion(8)
    num = tau_expansion(8, mpq(7, 3))
    assert all(num[k] == sym[k].substitute_nu(mpq(7, 3)) for k in range(9))


def test_b_polynomial():
    assert b_polynomial(0) == UPoly([1])
    assert b_polynomial(1) == UPoly([1, -4])
    assert b_polynomial(2)(0) == 9
    assert b_polynomial(2)(mpq(25, 4)) == 384
    with pytest.raises(DomainError):
        b_polynomial(-1)


def test_negative_order_rejected():
    with pytest.raises(DomainError):
        tau_expansion(-1)


def test_homogeneity_and_euler():
    tau = tau_expansion(14)
    for k in range(1, 15):
        assert tau[k].weighted_degree() == k
        assert tau[k].euler() == tau[k].scale(k)


def test_sharpened_divisibility():
    tau = tau_expansion(16)
    for k in range(1, 17):
        for m in range(1, 7):
            if k > m * (m - 1) // 2:
                assert divisible_by_b(tau[k], m)


def test_literal_divisibility_statement_is_false():
    # B_2 does not divide tau^(1)
    assert not divisible_by_b(tau_expansion(1)[1], 2)
    assert max_b_divisor(tau_expansion(1)[1]) == 1


def test_half_integer_truncation():
    for l in range(5):
        size = l * (l + 1) // 2
        tau = tau_expansion(size + 3, (mpq(l) + mpq(1, 2)) ** 2)
        assert tau[size]
        assert all(tau[k].is_zero() for k in range(size + 1, size + 4))


def test_parse_nu():
    assert parse_nu(None) is None
    assert parse_nu("symbolic") is None
    assert parse_nu("1/3") == mpq(1, 3)
    with pytest.raises(DomainError):
        parse_nu("x/y")


def test_json_round_trip():
    tau = tau_expansion(5, "3/2")
    obj = json.loads(json.dumps(tau.to_json_obj()))
    assert obj["nu"] == "3/2" and obj["orders"] == 5
    assert TauSeries.from_json_obj(obj) == tau
    assert tau_expansion(3).header() == {"nu": "symbolic", "orders": 3}
