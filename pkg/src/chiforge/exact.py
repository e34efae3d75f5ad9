"""Exact rational helpers: serialization, fractional powers by cross-powering."""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

Q = Fraction
Number = Union[int, Fraction]


def q(x: Union[int, str, Fraction]) -> Fraction:
    """Parse ints, Fractions and strings like '3/8' or '7' (no floats)."""
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def fmt(x: Number) -> str:
    """Serialize as 'p/q' (denominator always written)."""
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}"


def _pow_ge(m: int, p: int, n: int, qq: int) -> bool:
    """m**p >= n**qq for positive ints, with bit-length shortcuts for huge exponents."""
    if p * (m.bit_length() - 1) >= qq * n.bit_length():
        return True
    if p * m.bit_length() <= qq * (n.bit_length() - 1):
        return False
    return m ** p >= n ** qq


def rpow_ge(u: Number, v: Number, e: Number) -> bool:
    """Exact test u >= v**e for rationals u, v > 0 and rational exponent e.

    Uses u**den >= v**num (after moving signs), i.e. integer cross-powering.
    """
    u, v, e = Fraction(u), Fraction(v), Fraction(e)
    if v <= 0:
        raise ValueError("base must be positive")
    if u <= 0:
        return False
    num, den = e.numerator, e.denominator
    if num < 0:
        v = 1 / v
        num = -num
    # u^den >= v^num  <=>  u.n^den * v.d^num >= v.n^num * u.d^den
    lhs = u.numerator ** den * v.denominator ** num
    rhs = v.numerator ** num * u.denominator ** den
    return lhs >= rhs


def rpow_gt(u: Number, v: Number, e: Number) -> bool:
    return rpow_ge(u, v, e) and not rpow_le(u, v, e)


def rpow_le(u: Number, v: Number, e: Number) -> bool:
    """Exact test u <= v**e."""
    u, v, e = Fraction(u), Fraction(v), Fraction(e)
    if v <= 0:
        raise ValueError("base must be positive")
    if u <= 0:
        return True
    num, den = e.numerator, e.denominator
    if num < 0:
        v = 1 / v
        num = -num
    lhs = u.numerator ** den * v.denominator ** num
    rhs = v.numerator ** num * u.denominator ** den
    return lhs <= rhs


def ceil_root(n: int, a: Number) -> int:
    """Least integer m >= 0 with m**a >= n, for n >= 0 and rational a >= 1."""
    a = Fraction(a)
    if a < 1:
        raise ValueError("ceil_root needs an exponent of at least 1")
    if n <= 1:
        return n
    p, qq = a.numerator, a.denominator
    lo, hi = 1, n  # lo fails, hi holds since a >= 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _pow_ge(mid, p, n, qq):
            hi = mid
        else:
            lo = mid
    return hi


def ceil_q(x: Number) -> int:
    return math.ceil(Fraction(x))


def floor_q(x: Number) -> int:
    return math.floor(Fraction(x))


def ceil_pow(v: Number, e: Number) -> int:
    """Least integer m with m >= v**e (v > 0, rational e)."""
    v, e = Fraction(v), Fraction(e)
    if e.denominator == 1:
        return math.ceil(v ** e.numerator)
    m = max(1, math.floor(float(v) ** float(e)))
    while m > 1 and rpow_ge(m - 1, v, e):
        m -= 1
    while not rpow_ge(m, v, e):
        m += 1
    return m


def ceil_log2(x: Number) -> int:
    """Least integer t with 2**t >= x, for x > 0."""
    x = Fraction(x)
    if x <= 0:
        raise ValueError("log of nonpositive number")
    t = 0
    if x >= 1:
        while Fraction(2) ** t < x:
            t += 1
        return t
    while Fraction(2) ** (t - 1) >= x:
        t -= 1
    return t


def exact_root(x: Number, n: int):
    """The rational n-th root of x >= 0 when it exists, else None."""
    x = Fraction(x)
    if x < 0 or n < 1:
        raise ValueError("exact_root needs x >= 0 and n >= 1")

    def iroot(m: int):
        r = round(m ** (1.0 / n)) if m.bit_length() < 1000 else _int_root(m, n)
        for c in (r - 1, r, r + 1):
            if c >= 0 and c ** n == m:
                return c
        c = _int_root(m, n)
        return c if c ** n == m else None

    a, b = iroot(x.numerator), iroot(x.denominator)
    if a is None or b is None:
        return None
    return Fraction(a, b)


def _int_root(m: int, n: int) -> int:
    """floor(m ** (1/n)) by Newton iteration on integers."""
    if m < 2:
        return m
    x = 1 << -(-m.bit_length() // n)
    while True:
        y = ((n - 1) * x + m // x ** (n - 1)) // n
        if y >= x:
            return x
        x = y


def floor_sqrt_q(x: Number) -> int:
    """floor(sqrt(x)) for rational x >= 0."""
    x = Fraction(x)
    m = math.isqrt(x.numerator // x.denominator) if x >= 1 else 0
    while Fraction(m + 1) ** 2 <= x:
        m += 1
    while m > 0 and Fraction(m) ** 2 > x:
        m -= 1
    return m


def ceil_sqrt_q(x: Number) -> int:
    """ceil(sqrt(x)) for rational x >= 0."""
    x = Fraction(x)
    m = floor_sqrt_q(x)
    return m if Fraction(m) ** 2 == x else m + 1
