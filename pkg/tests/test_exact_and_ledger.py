from __future__ import annotations

from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from chiforge.exact import ceil_root, ceil_sqrt_q, floor_sqrt_q, q, rpow_ge
from chiforge.ledger import account, ledger


def test_parse_rationals():
    assert q("3/8") == Fraction(3, 8)
    assert q(7) == 7
    with pytest.raises(TypeError):
        q(0.5)
    with pytest.raises(TypeError):
        q(True)


@given(st.integers(0, 10 ** 9), st.integers(1, 5))
def test_ceil_root_is_least(n, a):
    m = ceil_root(n, a)
    assert m ** a >= n
    assert m == 0 or (m - 1) ** a < n


@given(st.fractions(Fraction(0), Fraction(10 ** 6)))
def test_square_root_bounds(x):
    lo, hi = floor_sqrt_q(x), ceil_sqrt_q(x)
    assert lo * lo <= x < (lo + 1) ** 2
    assert (hi - 1) ** 2 < x <= hi * hi or x == hi == 0


@given(st.fractions(Fraction(1, 100), Fraction(100)), st.fractions(Fraction(1, 100), Fraction(100)),
       st.integers(1, 6))
def test_rational_power_comparison(u, v, e):
    assert rpow_ge(u, v, e) == (u >= v ** e)


def test_constant_chain():
    led = ledger()
    assert (led.a1, led.b_mid, led.a2, led.d) == (200, 48_000_000, 36_864_001_152_000_000,
                                                  1_179_648_036_864_000_096)
    assert led.check() == []
    small = ledger(1)
    assert (small.b_mid, small.a2, small.d) == (6, 720, 23136)
    assert replace(small, d=small.d + 1).check() == ["d != 32*a2 + 96"]


def test_accounting_base_case():
    steps = account(1, 1, "pair")
    assert steps and all(s.holds for s in steps)
