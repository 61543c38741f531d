from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qsa.classical import (
    ShorOutcome,
    continued_fraction_period,
    div_constants,
    extract_factors,
    gm_divide,
    mod_exp_constants,
    mod_inverse,
    prime_power_base,
    sra,
    xsign,
)
from qsa.errors import InvalidDivisor, NoInverse, QuotientOverflow


@pytest.mark.parametrize(
    "d,n,expected",
    [
        (5, 4, (3, 9, 10, -6)),
        (1, 4, (1, 15, 8, -8)),
        (7, 4, (3, 2, 14, -2)),
    ],
)
def test_div_constants(d, n, expected):
    k = div_constants(d, n)
    assert (k.l, k.m_prime, k.d_norm, k.d_c) == expected


@pytest.mark.parametrize("d", [0, 16, -1])
def test_div_constants_rejects_bad_divisor(d):
    with pytest.raises(InvalidDivisor):
        div_constants(d, 4)


@pytest.mark.parametrize("n", range(1, 8))
def test_gm_divide_exhaustive(n):
    for d in range(1, 1 << n):
        for z in range(d << n):
            assert gm_divide(z, d, n) == divmod(z, d)


@given(st.integers(1, 24).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, (1 << n) - 1))), st.data())
def test_gm_divide_property(nd, data):
    n, d = nd
    z = data.draw(st.integers(0, (d << n) - 1))
    assert gm_divide(z, d, n) == divmod(z, d)


def test_gm_divide_overflow():
    with pytest.raises(QuotientOverflow):
        gm_divide(80, 5, 4)


def test_word_ops():
    assert xsign(0b1000, 4) == 0b1111
    assert xsign(0b0111, 4) == 0
    assert sra(0b1000, 2, 4) == 0b1110


def test_mod_inverse():
    assert mod_inverse(4, 21) == 16
    with pytest.raises(NoInverse) as info:
        mod_inverse(6, 21)
    assert info.value.factor == 3


def test_mod_exp_constants():
    assert mod_exp_constants(2, 21, 5) == [pow(2, 1 << i, 21) for i in range(10)]
    assert mod_exp_constants(7, 15, 4)[:3] == [7, 4, 1]


@pytest.mark.parametrize("y,bits,N,r", [(64, 8, 15, 4), (0, 8, 15, None), (171, 9, 21, 3)])
def test_continued_fraction_period(y, bits, N, r):
    assert continued_fraction_period(y, bits, N) == r


def test_extract_factors():
    assert extract_factors(7, 4, 15) == (3, 5)
    assert extract_factors(2, 6, 21) == (3, 7)
    assert extract_factors(7, 3, 15) is None
    assert extract_factors(14, 2, 15) is None  # 14 == -1 mod 15


def test_prime_power_base():
    assert prime_power_base(27) == 3
    assert prime_power_base(15) is None
    assert prime_power_base(13) == 13


def test_shor_outcome_checks_factors():
    with pytest.raises(ValueError):
        ShorOutcome(7, 15, 0, 4, (3, 7))
