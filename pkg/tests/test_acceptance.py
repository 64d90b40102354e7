# -*- coding: utf-8 -*-

"""
End-to-end checks of the embedding bounds on random instances. The default run uses a few
trials per size; the full sweeps are marked ``slow`` (``pytest -m slow``).
"""

import math

import numpy as np
import pytest

from diversipy import core
from diversipy import distortion
from diversipy import embed
from diversipy import families
from diversipy import instances
from diversipy import utils

SLACK = 1e-9


def sweep(fast, full):
    """Parametrize values: ``fast`` always, the rest of ``full`` under the slow marker."""
    slow = [v for v in full if v not in fast]
    return list(fast) + [pytest.param(*(v if isinstance(v, tuple) else (v,)), marks=pytest.mark.slow)
                         for v in slow]


@pytest.mark.parametrize("n", [4, 6, 8, 10])
@pytest.mark.parametrize("trials", sweep([5], [50]))
def test_coordinate_embedding_within_n(n, trials):
    for trial in range(trials):
        oracle = instances.random_diversity(n, utils.derive_rng(1, n, trial))
        report = distortion.exact_distortion(oracle, embed.coordinate_embed(oracle))
        assert report.c <= n * (1 + SLACK), (trial, oracle)
        assert report.c1 <= 1 + SLACK


def test_discrete_three_points():
    oracle = families.DiscreteDiversity(3)
    report = distortion.exact_distortion(oracle, embed.coordinate_embed(oracle))
    assert report.c == pytest.approx(1.5)


@pytest.mark.parametrize("metrics,trees", sweep([(2, 20)], [(10, 200)]))
def test_frt_dominance(random_metrics, metrics, trees):
    for metric in random_metrics(metrics, 16, seed=31):
        ensemble = embed.sample_ensemble(metric, m=trees, seed=1)
        stats = distortion.ensemble_stretch(metric, ensemble)
        assert stats.min_single >= 1 - 1e-12


@pytest.mark.parametrize("n", [4, 6, 8, 10])
@pytest.mark.parametrize("trials", sweep([3], [20]))
def test_frt_against_steiner(n, trials, record_property):
    worst = 0.0
    for trial in range(trials):
        metric = instances.random_metric(n, utils.derive_rng(2, n, trial))
        emb = embed.frt_embed(metric, m=64, seed=trial)
        steiner = families.steiner_table(metric)
        assert np.all(core.l1_diversity_table(emb) >= steiner - SLACK)
        worst = max(worst, distortion.exact_distortion(families.SteinerDiversity(metric), emb).c)
    record_property("fit_const", worst / math.log2(n))
    assert worst <= 8 * math.log2(n)


@pytest.mark.parametrize("seed", range(30))
def test_hypergraph_reduction_sandwich(seed):
    gen = utils.derive_rng(3, seed)
    n = int(gen.integers(3, 7))
    k = int(gen.integers(2, min(4, n) + 1))
    needed = -(-(n - 1) // (k - 1))
    hypergraph = instances.random_hypergraph(n, gen, edges=int(gen.integers(needed, 9)), max_size=k)
    metric, _ = embed.hypergraph_to_graph(hypergraph)
    source = families.HypergraphSteinerDiversity(hypergraph)
    result = distortion.sandwich_check(source, families.SteinerDiversity(metric), source,
                                       factor=max(1, hypergraph.k - 1))
    assert result.passed, result


@pytest.mark.parametrize("seed", range(30))
def test_tsp_and_ball_sandwiches(seed):
    gen = utils.derive_rng(4, seed)
    metric = instances.random_metric(int(gen.integers(3, 9)), gen)
    steiner = families.SteinerDiversity(metric)
    diameter = families.DiameterDiversity(metric)
    assert distortion.sandwich_check(steiner, families.TspDiversity(metric), steiner, factor=2.0).passed
    assert distortion.sandwich_check(diameter, families.BallDiversity(metric), diameter, factor=2.0).passed


@pytest.mark.parametrize("seed", range(50))
def test_tree_embedding_is_exact(seed):
    gen = utils.derive_rng(5, seed)
    tree = instances.random_tree(int(gen.integers(2, 11)), gen)
    report = distortion.exact_distortion(families.TreeDiversity(tree), embed.tree_to_l1(tree))
    assert report.c == pytest.approx(1.0, abs=SLACK)


@pytest.mark.parametrize("n", [6, 8, 12, 16])
@pytest.mark.parametrize("samples", sweep([20], [100]))
def test_frt_trees_over_discrete_metric_are_long(n, samples):
    metric = core.FiniteMetric.discrete(n)
    for seed in range(samples):
        check = distortion.check_tree_length(embed.frt_sample_tree(metric, seed))
        assert check.dominates
        assert check.total_length >= n // 2


@pytest.mark.parametrize("n", range(3, 11))
def test_singleton_scheme_on_discrete(n):
    discrete = families.DiscreteDiversity(n)
    cardinality = families.CardinalityDiversity(n)
    emb = embed.scheme_embed(discrete, embed.uniform_singleton_weights(n, embed.SET_AUGMENTED))
    table = core.l1_diversity_table(emb)
    sizes = utils.popcount_table(n)
    big = sizes >= 2
    assert np.allclose(table[big], sizes[big] / n)
    assert distortion.exact_distortion(discrete, emb).c == pytest.approx(n / 2)

    weights = embed.bourgain_scheme_weights(n, embed.BourgainConfig(seed=n))
    a = embed.scheme_embed(discrete, weights)
    b = embed.scheme_embed(cardinality, weights)
    assert np.array_equal(core.l1_diversity_table(a), core.l1_diversity_table(b))
    c_discrete, c_cardinality, bound = distortion.obstruction_bound(a)
    assert max(c_discrete, c_cardinality) >= bound - SLACK


@pytest.mark.parametrize("n", [8, 16, 32])
def test_bourgain_diameter_route(n, random_metrics, record_property):
    cfg = embed.BourgainConfig(samples_per_scale=16, seed=n)
    cases = [(families.DiscreteDiversity(n), core.FiniteMetric.discrete(n))]
    metric = random_metrics(1, n, seed=n)[0]
    cases.append((families.DiameterDiversity(metric), metric))
    worst = []
    for oracle, d in cases:
        emb = embed.bourgain_embed_metric(d, cfg)
        if n <= 16:
            report = distortion.exact_distortion(oracle, emb)
        else:
            report = distortion.sampled_distortion(oracle, emb, 2000, seed=n)
        assert not report.unbounded
        worst.append(report.c)
    record_property("fit_const_discrete", worst[0] / math.log2(n) ** 2)
    record_property("fit_const_random", worst[1] / math.log2(n) ** 2)
    assert max(worst) <= 4 * math.log2(n) ** 2


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(20))
def test_dreyfus_wagner_against_enumeration(seed, random_metrics):
    metric = random_metrics(1, 6, seed=40 + seed)[0]
    table = families.steiner_table(metric)
    for mask in range(1 << 6):
        if utils.popcount(mask) >= 2:
            assert table[mask] == pytest.approx(families.steiner_diversity_bruteforce(metric, mask), abs=SLACK)
