import pytest

from gbgw.exactalg import DomainError, mpq, t
from gbgw.reference import tau_table, half_integer_tau, parse_times


def test_parse_times_rewrites_even_powers_of_n():
    p = parse_times("3*t1**2*N**2 - t3/2")
    assert p.coefficient({1: 2}, 1) == 3
    assert p.coefficient({3: 1}) == mpq(-1, 2)


def test_parse_times_rejects_odd_n_and_even_times():
    with pytest.raises(DomainError):
        parse_times("N*t1")
    with pytest.raises(DomainError):
        parse_times("t2")


def test_first_table_entry():
    assert tau_table(1) == t(1).scale(mpq(1, 16)) - parse_times("N**2*t1").scale(mpq(1, 4))


def test_half_integer_tau_constant_term():
    assert half_integer_tau(2).coefficient({}) == 1
