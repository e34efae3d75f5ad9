from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from chiforge import density_increment as di
from chiforge.p5_generators import complete_graph
from chiforge.procedure import PreconditionError
from chiforge.verifier import verify_certificate
from chiforge.verify_harness import run_campaign


@given(st.integers(1, 12), st.integers(0, 12))
def test_bucket_count_matches_log_formula(i, j):
    x, y = Fraction(1, 2 ** (i + j)), Fraction(1, 2 ** i)
    # ceil(log2(1/x) - log2(1/y)/2), exact for powers of two
    assert di.bucket_count(x, y) == max(1, math.ceil((i + j) - i / 2))


@given(st.integers(1, 10 ** 6))
def test_combine_q_is_ceiling_root(m):
    qn = di.combine_q(Fraction(1, m))
    assert (qn - 1) ** 2 < m <= qn ** 2


def test_round_one_guards_its_parameter_range():
    with pytest.raises(PreconditionError):
        di.round1(complete_graph(8), Fraction(1, 4))


def test_round_one_relaxed_on_clique():
    g = complete_graph(8)
    cert = di.round1(g, Fraction(1, 4), "relaxed")
    assert cert.kind == "blockade"
    assert verify_certificate(g, cert).ok


def test_increment_step_on_clique():
    g = complete_graph(10)
    cert = di.incre1_step(g, Fraction(1, 256), Fraction(1, 256), "relaxed")
    assert verify_certificate(g, cert).ok


@pytest.mark.parametrize("name", ["avg_p5", "dense_shrink", "dense_combine", "incre1_step", "round1"])
def test_small_campaign_has_no_failures(name):
    rep = run_campaign(name, 25, seed=102)
    assert rep.consistent
    assert rep.failed == 0 and rep.errors == 0
