# -*- coding: utf-8 -*-

import math

import numpy as np
import pytest

from diversipy import core
from diversipy import distortion
from diversipy import embed
from diversipy import families
from diversipy.trees import WeightedTree


@pytest.fixture
def discrete_coordinate():
    oracle = families.DiscreteDiversity(3)
    return oracle, embed.coordinate_embed(oracle)


class TestExact:

    def test_discrete_coordinate(self, discrete_coordinate):
        report = distortion.exact_distortion(*discrete_coordinate)
        assert report.c2 == 3.0
        assert report.c1 == 0.5
        assert report.c == 1.5
        assert report.witness_min == 0b011
        assert report.witness_max == 0b111
        assert report.subsets_scanned == 4
        assert report.to_json() == {"c1": 0.5, "c2": 3.0, "c": 1.5, "witness_min": [0, 1],
                                    "witness_max": [0, 1, 2], "mode": "exact", "subsets_scanned": 4}

    def test_scale_invariance(self, random_metrics):
        metric = random_metrics(1, 6, seed=21)[0]
        oracle = families.SteinerDiversity(metric)
        emb = embed.frt_embed(metric, m=4, seed=3)
        a = distortion.exact_distortion(oracle, emb)
        b = distortion.exact_distortion(oracle, emb.scaled(4.0))
        assert b.c == pytest.approx(a.c, rel=1e-12)
        assert b.c2 == pytest.approx(4.0 * a.c2, rel=1e-12)
        assert b.witness_min == a.witness_min
        assert b.witness_max == a.witness_max

    def test_identity_embedding(self, rng):
        coords = rng.normal(size=(7, 3))
        report = distortion.exact_distortion(core.L1Diversity(coords), core.PointEmbedding(coords))
        assert report.c == pytest.approx(1.0)

    def test_unbounded(self):
        report = distortion.exact_distortion(families.DiscreteDiversity(3), core.PointEmbedding([[0.0], [0.0], [1.0]]))
        assert report.unbounded
        assert math.isinf(report.c1)
        assert report.c2 == 1.0
        assert report.witness_min == 0b011
        assert report.witness_max == 0b101
        payload = report.to_json()
        assert payload["c"] == "unbounded"
        assert payload["c1"] is None

    def test_not_a_diversity(self):
        values = families.DiscreteDiversity(3).table().copy()
        values[6] = 0.0
        with pytest.raises(core.NotADiversityError):
            distortion.exact_distortion(core.TableDiversity(values), core.PointEmbedding(np.eye(3)))

    def test_ground_mismatch(self):
        with pytest.raises(core.GroundSetMismatchError):
            distortion.exact_distortion(families.DiscreteDiversity(3), core.PointEmbedding(np.eye(4)))

    def test_single_point(self):
        report = distortion.exact_distortion(families.DiscreteDiversity(1), core.PointEmbedding([[0.0]]))
        assert report.c == 1.0
        assert report.subsets_scanned == 0


class TestSampled:

    def test_never_above_exact(self, random_metrics):
        metric = random_metrics(1, 10, seed=22)[0]
        oracle = families.DiameterDiversity(metric)
        emb = embed.bourgain_embed_metric(metric, embed.BourgainConfig(samples_per_scale=8, seed=1))
        exact = distortion.exact_distortion(oracle, emb)
        sampled = distortion.sampled_distortion(oracle, emb, 200, seed=5)
        assert sampled.mode == "sampled"
        assert sampled.subsets_scanned < exact.subsets_scanned
        assert sampled.c <= exact.c * (1 + 1e-9)
        payload = sampled.to_json()
        assert payload["count"] == 200
        assert payload["seed"] == 5

    def test_reproducible(self, random_metrics):
        metric = random_metrics(1, 10, seed=23)[0]
        oracle = families.SteinerDiversity(metric)
        emb = embed.coordinate_embed(oracle)
        a = distortion.sampled_distortion(oracle, emb, 50, seed=2)
        b = distortion.sampled_distortion(oracle, emb, 50, seed=2)
        assert a == b

    def test_full_count_is_exact(self, discrete_coordinate):
        oracle, emb = discrete_coordinate
        report = distortion.sampled_distortion(oracle, emb, 4, seed=0)
        assert report.mode == "sampled"
        assert report.c == 1.5
        assert report.subsets_scanned == 4

    def test_pairs_and_whole_set_always_scanned(self):
        oracle = families.DiscreteDiversity(6)
        emb = embed.coordinate_embed(oracle)
        report = distortion.sampled_distortion(oracle, emb, 1, seed=0)
        assert report.subsets_scanned >= 16
        assert report.c == pytest.approx(3.0)

    def test_bad_count(self, discrete_coordinate):
        with pytest.raises(ValueError):
            distortion.sampled_distortion(*discrete_coordinate, 0)


def test_metric_distortion():
    oracle = families.DiscreteDiversity(4)
    report = distortion.metric_distortion(core.FiniteMetric.discrete(4), embed.coordinate_embed(oracle))
    assert report.mode == "pairs"
    assert report.c == 1.0
    assert report.c2 == 2.0
    assert report.subsets_scanned == 6
    assert report.witness_max == 0b0011


class TestSandwich:

    def test_steiner_tsp(self, random_metrics):
        metric = random_metrics(1, 7, seed=24)[0]
        steiner = families.SteinerDiversity(metric)
        result = distortion.sandwich_check(steiner, families.TspDiversity(metric), steiner, factor=2.0)
        assert result.passed
        assert result.violation_count == 0
        assert result.first_violation is None

    def test_diameter_ball(self, random_metrics):
        metric = random_metrics(1, 8, seed=25)[0]
        diameter = families.DiameterDiversity(metric)
        assert distortion.sandwich_check(diameter, families.BallDiversity(metric), diameter, factor=2.0).passed

    def test_factor_on_lower_side(self, unit_square):
        tsp = families.TspDiversity(unit_square)
        assert distortion.sandwich_check(tsp, families.SteinerDiversity(unit_square), tsp, factor=2.0,
                                         factor_side="lower").passed

    def test_corrupted_value(self, unit_square):
        values = families.TspDiversity(unit_square).table().copy()
        values[7] *= 3
        steiner = families.SteinerDiversity(unit_square)
        result = distortion.sandwich_check(steiner, core.TableDiversity(values), steiner, factor=2.0)
        assert not result.passed
        assert result.violation_count == 1
        assert result.first_violation == 7
        assert result.side == "upper"
        assert result.lhs == pytest.approx(3 * (2 + math.sqrt(2)))
        assert result.rhs == pytest.approx(4.0)

    def test_lower_failure(self, unit_square):
        diameter = families.DiameterDiversity(unit_square)
        steiner = families.SteinerDiversity(unit_square)
        result = distortion.sandwich_check(steiner, diameter, steiner)
        assert not result.passed
        assert result.side == "lower"
        assert result.first_violation == 7

    def test_errors(self, unit_square, star_metric):
        steiner = families.SteinerDiversity(unit_square)
        with pytest.raises(ValueError):
            distortion.sandwich_check(steiner, steiner, steiner, factor_side="middle")
        with pytest.raises(core.GroundSetMismatchError):
            distortion.sandwich_check(steiner, families.DiscreteDiversity(5), steiner)


def test_ensemble_stretch(random_metrics):
    metric = random_metrics(1, 6, seed=26)[0]
    ensemble = embed.sample_ensemble(metric, m=10, seed=4)
    stats = distortion.ensemble_stretch(metric, ensemble)
    assert stats.samples == 10
    assert stats.min_single >= 1 - 1e-12
    assert stats.max_mean >= 1.0
    assert stats.max_single >= stats.max_mean
    assert np.all(np.diag(stats.pair_mean) == 0)


@pytest.mark.parametrize("n", [8, 16])
def test_mean_stretch_on_discrete_metric(n):
    metric = core.FiniteMetric.discrete(n)
    stats = distortion.ensemble_stretch(metric, embed.sample_ensemble(metric, m=200, seed=n))
    assert stats.samples == 200
    assert stats.min_single >= 1 - 1e-12
    assert stats.max_mean <= 8 * math.log(n)


class TestObstruction:

    def test_coordinate_embedding(self):
        c_discrete, c_cardinality, bound = distortion.obstruction_bound(
            embed.coordinate_embed(families.DiscreteDiversity(5)))
        assert c_discrete == pytest.approx(2.5)
        assert c_cardinality == pytest.approx(1.6)
        assert bound == 2.0

    @pytest.mark.parametrize("seed", range(5))
    def test_any_embedding(self, seed):
        gen = np.random.default_rng(900 + seed)
        emb = core.PointEmbedding(gen.normal(size=(6, 4)))
        c_discrete, c_cardinality, bound = distortion.obstruction_bound(emb)
        assert max(c_discrete, c_cardinality) >= bound - 1e-9


class TestTreeLength:

    def test_bound(self):
        assert [distortion.phylogenetic_lower_bound(n) for n in (1, 2, 7, 8)] == [0, 1, 3, 4]

    def test_star_with_unplaced_centre(self):
        tree = WeightedTree(4, [(3, 0, 0.5), (3, 1, 0.5), (3, 2, 0.5)], [0, 1, 2])
        check = distortion.check_tree_length(tree)
        assert check.dominates
        assert check.total_length == 1.5
        assert check.bound == 1
        assert check.holds

    def test_placed_centre_does_not_dominate(self):
        assert not distortion.check_tree_length(WeightedTree.star([0.5, 0.5, 0.5])).dominates

    def test_short_tree_does_not_dominate(self):
        check = distortion.check_tree_length(WeightedTree.path([0.4, 0.4, 0.4]))
        assert not check.dominates
        assert check.holds

    def test_frt_samples(self):
        metric = core.FiniteMetric.discrete(8)
        for seed in range(10):
            check = distortion.check_tree_length(embed.frt_sample_tree(metric, seed))
            assert check.dominates
            assert check.holds
