import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from gbgw.cutjoin import tau_expansion
from gbgw.exactalg import DomainError, TimesPolynomial, mpq, t
from gbgw.freenergy import (
    fixed_n_form,
    b_decompose,
    double_factorial,
    exp_expansion,
    free_energy,
    genus0_coefficient,
    genus_table,
    log_expansion,
    monomial_genus,
    moment_monomials,
    moment_to_t,
    multi_index_to_monomial,
    multi_indices,
    to_moments,
)

from conftest import T, to_sympy


@pytest.fixture(scope="module")
def table():
    return genus_table(18)


@pytest.fixture(scope="module")
def moments(table):
    return {g: to_moments(g, table) for g in range(7)}


def test_log_matches_sympy_series():
    eps = sympy.Symbol("eps")
    tau = tau_expansion(6)
    series = sum(to_sympy(tau[k]) * eps ** k for k in range(7))
    expected = sympy.expand(sympy.series(sympy.log(series), eps, 0, 7).removeO())
    F = log_expansion(tau)
    for k in range(7):
        assert sympy.expand(to_sympy(F[k]) - expected.coeff(eps, k)) == 0


def test_exp_inverts_log():
    tau = tau_expansion(10)
    assert exp_expansion(log_expansion(tau)) == tau.orders


def test_max_factors_truncation():
    full = free_energy(10)
    cut = free_energy(10, max_factors=2)
    for k in range(11):
        assert cut[k] == full[k].truncate(max_factors=2)


def test_low_order_free_energy():
    F = free_energy(2)
    assert F[1] == tau_expansion(1)[1]
    # F_1 t_1 coefficient at S = 0 is forced to 1/16
    assert genus_table(4)[1].coefficient({1: 1}) == mpq(1, 16)


def test_monomial_genus():
    assert monomial_genus(((1,), 0)) == 1
    assert monomial_genus(((1,), 1)) == 0
    assert monomial_genus(((2,), 1)) == 0


@given(st.integers(1, 5), st.integers(0, 8))
@settings(max_examples=20, deadline=None)
def test_moment_to_t_matches_sympy(w, order):
    for mono in moment_monomials(w):
        expr = sympy.Integer(1)
        for i, e in enumerate(mono):
            k = 2 * i + 1
            if k > 1:
                expr *= (T[k] / (2 - T[1]) ** k) ** e
        K = sum((2 * i + 1) * e for i, e in enumerate(mono))
        depth = max(order - K, 0)
        s = sympy.expand(sympy.series(expr, T[1], 0, depth + 1).removeO())
        got = moment_to_t(mono, order)
        if K > order:
            assert got.is_zero()
        else:
            assert sympy.expand(to_sympy(got) - s) == 0


def test_moment_monomials_counts():
    assert [len(moment_monomials(w)) for w in range(1, 6)] == [1, 2, 3, 5, 7]


def test_log_terms(moments):
    assert moments[0].log_coeff == {1: mpq(1, 2)}
    assert moments[1].log_coeff == {0: mpq(-1, 8)}
    obj = moments[1].to_json_obj()
    assert obj["log"] == [{"log_coeff": "-1/8", "S_power": 0}]


def test_moment_residuals_vanish(moments):
    assert all(m.ok for m in moments.values())


def test_s_zero_genus_two(moments):
    assert moments[2].at_s_zero() == t(3).scale(mpq(9, 128))


def test_low_genus_pieces(moments):
    assert moments[0].ft(1).is_zero()
    assert moments[0].ft(2) == t(3).scale(mpq(1, 8))
    assert moments[1].ft(1) == t(3).scale(mpq(5, 16))
    assert moments[1].ft(2) == t(3, 2).scale(mpq(93, 64)) + t(5).scale(mpq(35, 64))


def test_b_decompose_residuals(moments):
    for g in range(2, 7):
        bd = b_decompose(g, fixed_n_form(g, moments))
        assert bd.ok
        assert set(bd.parts) <= set(range(2, g + 1))
    assert b_decompose(2, fixed_n_form(2, moments)).parts[2] == t(3).scale(mpq(1, 128))


def test_b_decompose_domain():
    with pytest.raises(DomainError):
        b_decompose(1, TimesPolynomial.zero())


def test_genus_zero_conjecture(moments):
    indices = multi_indices(6)
    assert len(indices) == 29
    for j in indices:
        c, s_power = genus0_coefficient(j)
        d = s_power // 2
        key = (multi_index_to_monomial(j), 0)
        assert moments[0].ft(d).terms.get(key, mpq(0)) * (-1) ** d == c


def test_genus_zero_examples():
    # matches the T_3/8 piece at S^4
    assert genus0_coefficient((1,)) == (mpq(1, 8), 4)
    assert double_factorial(7) == 105
    with pytest.raises(DomainError):
        genus0_coefficient((0, 0))


def test_order_beyond_table(table):
    with pytest.raises(DomainError):
        to_moments(2, table, order=table.order + 1)
