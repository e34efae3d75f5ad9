"""The exponent chain of the argument and the final chi <= omega^d bookkeeping.

All constants are exact integers.  ``account`` replays the induction step
that turns one verified trichotomy outcome plus inductive bounds for the
smaller pieces into chi(G) <= omega(G)^d, using only exact integer powers
(the exponents are far too large to expand, so comparisons go through
:func:`pow_at_least` / :func:`pow_at_most`).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional

from .certificate import pow_at_least, pow_at_most

A1 = 200


def b_of(a1: int) -> int:
    return 6 * a1 ** 3


def a2_of(b: int) -> int:
    return 16 * b * b + 24 * b


def d_of(a2: int) -> int:
    return 32 * a2 + 96


@dataclass(frozen=True)
class ConstantLedger:
    a1: int
    b_mid: int
    a2: int
    d: int
    eh_exponent: int

    def as_dict(self) -> Dict[str, object]:
        return {
            "a1": self.a1, "b_mid": self.b_mid, "a2": self.a2, "d": self.d, "eh_exponent": self.eh_exponent,
            "formulas": {"b_mid": "6*a1^3", "a2": "16*b_mid^2 + 24*b_mid", "d": "32*a2 + 96"},
            "d_at_least_160": self.d >= 160,
        }

    def check(self) -> List[str]:
        """Violated invariants (empty when the chain is consistent)."""
        bad = []
        if self.b_mid != b_of(self.a1):
            bad.append("b_mid != 6*a1^3")
        if self.a2 != a2_of(self.b_mid):
            bad.append("a2 != 16*b^2 + 24*b")
        if self.d != d_of(self.a2):
            bad.append("d != 32*a2 + 96")
        if self.d < 160:
            bad.append("d < 160")
        return bad


def ledger(a1: int = A1) -> ConstantLedger:
    b = b_of(a1)
    a2 = a2_of(b)
    # the midway step takes the clique/stable-set exponent equal to a1
    return ConstantLedger(a1, b, a2, d_of(a2), a1)


LEDGER = ledger()
B_MID = LEDGER.b_mid
A2 = LEDGER.a2
D = LEDGER.d


@dataclass(frozen=True)
class AccountStep:
    claim: str
    holds: bool


def account(chi_g: int, omega_g: int, outcome: str, d: int = D, *, y: Optional[Fraction] = None,
            chi_x: int = 0, omega_x: int = 0, chi_y: int = 0, omega_y: int = 0,
            k: int = 0, block_chis: Optional[List[int]] = None, block_omegas: Optional[List[int]] = None
            ) -> List[AccountStep]:
    """Replay the inductive bound chi(G) <= omega(G)^d from one trichotomy outcome.

    outcome 'pair': a complete pair (X, Y) with chi(X) >= y^d chi(G) and
    chi(Y) >= (1-y) chi(G); the smaller-omega side gets the inductive
    bound chi <= omega^d.  outcome 'blockade': a complete blockade of
    length k >= 2 with chi(B_i) >= k^-d chi(G).  Base cases (omega <= 1
    or chi < 2^d) are checked directly.  Every step returns whether its
    inequality holds exactly.
    """
    steps: List[AccountStep] = []

    def step(claim: str, ok: bool) -> None:
        steps.append(AccountStep(claim, bool(ok)))

    if omega_g <= 1:
        step("omega(G) <= 1 forces chi(G) <= 1", chi_g <= 1)
        return steps
    if not pow_at_most(Fraction(2), d, Fraction(chi_g)):
        step("chi(G) < 2^d <= omega(G)^d", pow_at_least(Fraction(omega_g), d, Fraction(chi_g)))
        return steps
    if outcome == "pair":
        if y is None or not 0 < y < 1:
            raise ValueError("pair outcome needs y in (0, 1)")
        step("chi(X) >= y^d chi(G)", pow_at_least(1 / y, d, Fraction(chi_g, chi_x)) if chi_x else False)
        step("chi(Y) >= (1-y) chi(G)", chi_y >= (1 - y) * chi_g)
        if omega_x <= y * omega_g:
            # chi(G) <= y^-d chi(X) <= y^-d omega(X)^d <= omega(G)^d
            step("induction on X: chi(X) <= omega(X)^d", pow_at_least(Fraction(omega_x), d, Fraction(chi_x)))
            step("omega(X) <= y omega(G)", True)
        else:
            step("omega(X) > y omega(G) forces omega(Y) <= (1-y) omega(G)", omega_y <= (1 - y) * omega_g)
            step("induction on Y: chi(Y) <= omega(Y)^d", pow_at_least(Fraction(omega_y), d, Fraction(chi_y)))
        step("chi(G) <= omega(G)^d", pow_at_least(Fraction(omega_g), d, Fraction(chi_g)))
        return steps
    if outcome == "blockade":
        block_chis = block_chis or []
        block_omegas = block_omegas or []
        step("2 <= k <= omega(G)", 2 <= k <= omega_g)
        step("every block has chi >= k^-d chi(G)",
             all(pow_at_least(Fraction(k), d, Fraction(chi_g, c)) if c else False for c in block_chis))
        i = min(range(len(block_omegas)), key=lambda j: block_omegas[j]) if block_omegas else None
        if i is not None:
            step("some block has omega(B_i) <= omega(G)/k", k * block_omegas[i] <= omega_g)
            step("induction on B_i: chi(B_i) <= omega(B_i)^d",
                 pow_at_least(Fraction(block_omegas[i]), d, Fraction(block_chis[i])))
        step("chi(G) <= omega(G)^d", pow_at_least(Fraction(omega_g), d, Fraction(chi_g)))
        return steps
    raise ValueError(f"unknown outcome {outcome!r}")


__all__ = ["A1", "A2", "B_MID", "D", "LEDGER", "AccountStep", "ConstantLedger", "account", "ledger"]
