from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from chiforge.graph_core import find_induced_p5
from chiforge.p5_generators import (GenerationError, GenSpec, cograph, complete_multipartite, family, random_composite,
                                    random_p5free, split_graph)
from chiforge.chi_oracles import Oracle

from conftest import naive_p5


@settings(max_examples=60)
@given(st.integers(0, 11), st.floats(0, 1), st.integers(0, 10 ** 6), st.sampled_from(["repair", "rejection"]))
def test_random_instances_are_p5_free(n, p, seed, strategy):
    try:
        g = random_p5free(GenSpec(strategy, n, p, seed, max_retries=200))
    except GenerationError:
        assert strategy == "rejection"
        return
    assert not naive_p5(g)


def test_same_seed_same_graph():
    spec = GenSpec("repair", 10, 0.4, 7)
    assert random_p5free(spec) == random_p5free(spec)


@pytest.mark.parametrize("seed", range(20))
def test_composites_are_p5_free(seed):
    g = random_composite(12, random.Random(seed))
    assert find_induced_p5(g) is None


def test_named_families():
    assert Oracle(complete_multipartite([2, 3, 1])).chi() == 3
    assert find_induced_p5(split_graph(4, 5, 0.5, 3)) is None
    assert find_induced_p5(cograph(10, 2)) is None
    assert family("cycle5").n == 5
    with pytest.raises(GenerationError):
        family("path", n=5)
    with pytest.raises(GenerationError):
        family("no such family")


def test_bad_spec():
    with pytest.raises(GenerationError):
        random_p5free(GenSpec("repair", -1))
    with pytest.raises(GenerationError):
        random_p5free(GenSpec("teleport", 4))
