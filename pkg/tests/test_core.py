# -*- coding: utf-8 -*-

import numpy as np
import pytest

import diversipy
from diversipy import core
from diversipy import families
from diversipy import utils


def discrete_table(n):
    return core.TableDiversity((utils.popcount_table(n) >= 2).astype(float))


class TestMetric:

    def test_triangle_witness(self):
        with pytest.raises(core.MetricValidationError) as e:
            core.validate_metric([[0, 1, 5], [1, 0, 1], [5, 1, 0]])
        triangles = [v for v in e.value.violations if v.kind == "triangle"]
        assert triangles[0].indices == (0, 1, 2)
        assert triangles[0].lhs == 5.0
        assert triangles[0].rhs == 2.0

    def test_asymmetry_zero_and_diagonal(self):
        kinds = lambda dist: {v.kind for v in core._metric_violations(np.asarray(dist, dtype=float))}
        assert "asymmetry" in kinds([[0, 1], [2, 0]])
        assert "zero" in kinds([[0, 0], [0, 0]])
        assert "diagonal" in kinds([[1, 1], [1, 0]])
        assert "shape" in kinds([[0, 1, 2]])

    def test_nonfinite_entries(self):
        for bad in (np.nan, np.inf):
            with pytest.raises(core.MetricValidationError) as e:
                core.validate_metric([[0, bad], [bad, 0]])
            assert {v.kind for v in e.value.violations} == {"nonfinite"}
            assert e.value.violations[0].indices == (0, 1)

    def test_read_only(self, star_metric):
        with pytest.raises(ValueError):
            star_metric.dist[0, 1] = 3.0

    def test_discrete(self):
        metric = core.FiniteMetric.discrete(4)
        assert metric.diameter() == 1.0
        assert metric.min_distance() == 1.0


class TestL1:

    def test_eval(self):
        coords = [[0, 0], [1, 2], [3, 1]]
        assert core.eval_l1_diversity(coords, [0, 1, 2]) == 5.0
        assert core.eval_l1_diversity(coords, [0, 1]) == 3.0
        assert core.eval_l1_diversity(coords, [2]) == 0.0
        with pytest.raises(IndexError):
            core.eval_l1_diversity(coords, [3])

    def test_table_matches_eval(self, rng):
        coords = rng.normal(size=(6, 3))
        table = core.l1_diversity_table(coords)
        for mask in range(1 << 6):
            assert table[mask] == pytest.approx(core.eval_l1_diversity(coords, mask), abs=1e-12)

    def test_table_beyond_sixteen_points(self, rng):
        coords = rng.normal(size=(18, 2))
        table = core.l1_diversity_table(coords)
        for mask in rng.integers(0, 1 << 18, size=200):
            assert table[mask] == pytest.approx(core.eval_l1_diversity(coords, int(mask)), abs=1e-12)

    def test_oracle(self):
        oracle = core.L1Diversity([[0.0], [1.0], [3.0]])
        assert oracle.kind == "l1"
        assert oracle([0, 2]) == 3.0
        assert oracle.table()[7] == 3.0


class TestOracle:

    def test_small_sets_are_zero(self):
        oracle = families.DiscreteDiversity(3)
        assert oracle(0) == 0.0
        assert oracle([1]) == 0.0
        assert oracle([0, 1]) == 1.0

    def test_subset_table(self, star_metric):
        oracle = families.DiameterDiversity(star_metric)
        table = core.subset_table(oracle)
        assert len(table) == 1 << star_metric.n
        assert all(table[m] == oracle(m) for m in range(len(table)))

    def test_registry(self):
        assert core.OracleMeta.lookup("hypergraph") is families.HypergraphSteinerDiversity
        assert core.OracleMeta.lookup("steiner") is families.SteinerDiversity
        assert core.OracleMeta.lookup("l1") is core.L1Diversity
        with pytest.raises(KeyError):
            core.OracleMeta.lookup("nonexistent")

    def test_table_cap(self, monkeypatch):
        monkeypatch.setattr(diversipy, "TABLE_CAP", 3)
        with pytest.raises(core.CapExceededError):
            families.DiscreteDiversity(4).table()

    def test_table_json(self):
        payload = {"n": 3, "values": {"0,1": 1, "0,2": 1, "1,2": 1, "0,1,2": 1}}
        oracle = core.TableDiversity.from_json(payload)
        assert np.array_equal(oracle.table(), discrete_table(3).table())
        again = core.TableDiversity.from_json(oracle.to_json())
        assert np.array_equal(again.table(), oracle.table())

    def test_table_needs_power_of_two(self):
        with pytest.raises(ValueError):
            core.TableDiversity([0.0, 0.0, 1.0])
        with pytest.raises(core.GroundSetMismatchError):
            core.TableDiversity(np.zeros(8), ground=core.GroundSet(4))


class TestCombine:

    def test_combination(self):
        mixed = core.combine([2.0, 1.0], [families.DiscreteDiversity(3), families.CardinalityDiversity(3)])
        assert mixed([0, 1]) == 3.0
        assert mixed([0, 1, 2]) == 4.0
        assert mixed.table()[7] == 4.0

    def test_mismatched_ground_sets(self):
        with pytest.raises(core.GroundSetMismatchError):
            core.combine([1.0, 1.0], [families.DiscreteDiversity(3), families.DiscreteDiversity(4)])

    def test_bad_weights(self):
        with pytest.raises(ValueError):
            core.combine([-1.0], [families.DiscreteDiversity(3)])
        with pytest.raises(ValueError):
            core.combine([0.0], [families.DiscreteDiversity(3)])


class TestAxioms:

    def test_discrete_passes(self):
        report = core.check_diversity_axioms(discrete_table(4))
        assert report.passed
        assert report.monotone
        assert report.to_json()["violations"] == []

    def test_triangle_failure(self):
        values = discrete_table(3).table().copy()
        values[7] = 3.0
        report = core.check_diversity_axioms(core.TableDiversity(values))
        assert not report.passed
        assert all(v.axiom == "iii" for v in report.violations)
        a, b, c = report.violations[0].witnesses
        assert a | b | c == 7
        assert report.monotone

    def test_zero_pair(self):
        values = discrete_table(3).table().copy()
        values[3] = 0.0
        report = core.check_diversity_axioms(core.TableDiversity(values))
        assert report.violations[0].axiom == "ii"
        assert report.violations[0].witnesses == (3,)

    def test_cardinality_with_singletons(self):
        oracle = core.TableDiversity(utils.popcount_table(3).astype(float))
        assert oracle([0]) == 1.0
        report = core.check_diversity_axioms(oracle)
        assert not report.passed
        assert report.violations[0].axiom == "ii"
        assert report.violations[0].witnesses == (0b001,)
        assert {v.axiom for v in report.violations} == {"ii"}

    def test_table_json_keeps_singletons(self):
        oracle = core.TableDiversity.from_json({"n": 2, "values": {"0": 1.0, "0,1": 1.0}})
        assert oracle([0]) == 1.0
        assert oracle([1]) == 0.0
        assert oracle.params()["values"] == {"0": 1.0, "0,1": 1.0}
        assert not core.check_diversity_axioms(oracle).passed

    def test_non_monotone(self):
        values = 2.0 * discrete_table(3).table()
        values[7] = 1.0
        report = core.check_diversity_axioms(core.TableDiversity(values))
        assert not report.passed
        assert not report.monotone
        assert report.monotone_witness == (3, 7)

    def test_violation_cap(self):
        values = discrete_table(4).table().copy()
        values[15] = 10.0
        report = core.check_diversity_axioms(core.TableDiversity(values), max_violations=2)
        assert len(report.violations) == 2
        assert report.violation_count > 2

    def test_families_pass(self, random_metrics):
        metric = random_metrics(1, 6, seed=3)[0]
        for oracle in (families.SteinerDiversity(metric), families.DiameterDiversity(metric),
                       families.TspDiversity(metric), families.CardinalityDiversity(6)):
            assert core.check_diversity_axioms(oracle).passed, oracle

    def test_cap(self):
        with pytest.raises(core.CapExceededError):
            core.check_diversity_axioms(families.DiscreteDiversity(diversipy.AXIOM_CAP + 1))


def test_induced_metric():
    metric = core.induced_metric(families.DiscreteDiversity(4))
    assert metric == core.FiniteMetric.discrete(4)


def test_induced_metric_rejects_non_metric_pairs():
    values = discrete_table(3).table().copy()
    values[3] = 5.0
    with pytest.raises(core.MetricValidationError):
        core.induced_metric(core.TableDiversity(values))


def test_embedding_json():
    emb = core.PointEmbedding([[0.0, 1.0], [2.0, 3.0]], method="coordinate", seed=4)
    again = core.PointEmbedding.from_json(emb.to_json())
    assert np.array_equal(again.coords, emb.coords)
    assert again.method == "coordinate"
    assert again.seed == 4


class TestInducedMetric:

    @pytest.mark.parametrize("n", [2, 3, 5, 8])
    def test_discrete_and_cardinality_agree(self, n):
        discrete = core.induced_metric(families.DiscreteDiversity(n))
        cardinality = core.induced_metric(families.CardinalityDiversity(n))
        assert np.array_equal(discrete.dist, cardinality.dist)

    def test_steiner_and_tsp(self, random_metrics):
        for metric in random_metrics(3, 5, seed=12):
            steiner = core.induced_metric(families.SteinerDiversity(metric))
            tsp = core.induced_metric(families.TspDiversity(metric))
            assert np.allclose(steiner.dist, metric.dist)
            assert np.allclose(tsp.dist, 2 * metric.dist)
