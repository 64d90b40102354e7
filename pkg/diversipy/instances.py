# -*- coding: utf-8 -*-

"""
Instance files and their generators.

An instance is the JSON document

    {"n": int, "labels": [str]?, "metric": [[float]]?, "points": [[float]]?,
     "diversity": {"kind": str, ...}, "source": {...}?}

``metric`` and ``points`` are optional sources that metric-based and l1 families fall back to
when the ``diversity`` object doesn't carry its own. ``source`` records the generator and seed.
Kinds are resolved through `diversipy.core.OracleMeta`, so "hypergraph" and "l1" name
`HypergraphSteinerDiversity` and `L1Diversity`.
"""

import logging

import inflection
import networkx as nx
import numpy as np
from scipy.sparse.csgraph import shortest_path
from scipy.spatial.distance import cdist

import diversipy
from diversipy import core
from diversipy import families
from diversipy import utils
from diversipy.trees import WeightedTree

debug_logger = logging.getLogger(diversipy.DEBUG_LOGGER_NAME)


class InstanceError(core.DiversityError):
    """
    Raised when an instance document is malformed or a generator gets unusable parameters.
    """


METRIC_KINDS = ("diameter", "steiner", "ball", "tsp")


class Instance():

    def __init__(self, n, diversity, metric=None, points=None, labels=None, source=None):
        """
        Args:
            n: `int`.
            diversity: `dict`. The ``{"kind": ..., ...}`` object.
            metric: `diversipy.core.FiniteMetric` or None.
            points: n x k `numpy.ndarray` or None.
            labels: list of `str` or None.
            source: `dict` or None. Generator provenance.

        Raises:
            `InstanceError`: A part doesn't fit n points or ``diversity`` has no kind.
        """
        self.n = int(n)
        self.ground = core.GroundSet(self.n, labels)
        if not isinstance(diversity, dict) or "kind" not in diversity:
            raise InstanceError("The instance 'diversity' object needs a 'kind'.")
        self.spec = dict(diversity)
        if metric is not None and not isinstance(metric, core.FiniteMetric):
            metric = core.validate_metric(metric)
        if metric is not None and metric.n != self.n:
            raise InstanceError("The metric has {} points, the instance {}.".format(metric.n, self.n))
        self.metric = metric
        if points is not None:
            points = np.asarray(points, dtype=float)
            if points.ndim != 2 or points.shape[0] != self.n:
                raise InstanceError("Points must be an n x k matrix with n = {}.".format(self.n))
        self.points = points
        self.source = source or {}

    @property
    def kind(self):
        return inflection.underscore(self.spec["kind"].replace("-", "_"))

    def diversity(self, kind=None):
        """
        Builds the instance's oracle, or one of another family over the same sources.

        Args:
            kind: `str`. Overrides the stored kind; families that need more than the instance's
                metric, points or size (tree, hypergraph, partition, ...) only work when the
                override matches the stored kind.

        Returns:
            `diversipy.core.DiversityOracle`.

        Raises:
            `InstanceError`: The family needs a source the instance doesn't have.
            `KeyError`: Unknown kind.
        """
        spec = self.spec
        if kind is not None:
            cls = core.OracleMeta.lookup(kind)
            if cls is not core.OracleMeta.lookup(self.spec["kind"]):
                spec = {"kind": cls.KIND}
        return build_oracle(spec, self)

    def to_json(self):
        payload = {"n": self.n}
        if self.ground.labels:
            payload["labels"] = list(self.ground.labels)
        if self.metric is not None:
            payload["metric"] = self.metric.to_json()
        if self.points is not None:
            payload["points"] = self.points.tolist()
        payload["diversity"] = self.spec
        if self.source:
            payload["source"] = self.source
        return payload

    @classmethod
    def from_json(cls, payload):
        try:
            return cls(payload["n"], payload["diversity"], metric=payload.get("metric"),
                       points=payload.get("points"), labels=payload.get("labels"), source=payload.get("source"))
        except (KeyError, TypeError, ValueError) as e:
            raise InstanceError("Malformed instance: {}".format(e)) from e

    @classmethod
    def load(cls, path):
        return cls.from_json(utils.read_json(path))

    def save(self, path=None):
        utils.write_json(self.to_json(), path)

    def __repr__(self):
        return "<Instance n={} kind={}>".format(self.n, self.spec["kind"])


def _need(value, what, kind):
    if value is None:
        raise InstanceError("Kind '{}' needs {} in the instance.".format(kind, what))
    return value


def build_oracle(spec, instance=None):
    """
    Builds an oracle from a ``{"kind": ..., ...}`` object, falling back on the instance's metric,
    points and size where the object doesn't carry them.
    """
    cls = core.OracleMeta.lookup(spec["kind"])
    kind = cls.KIND
    n = instance.n if instance is not None else spec.get("n")
    try:
        if kind in METRIC_KINDS:
            if "metric" in spec:
                metric = core.validate_metric(spec["metric"])
            else:
                metric = _need(instance and instance.metric, "a metric", kind)
            return cls(metric)
        if kind == "l1":
            points = spec.get("points")
            if points is None:
                points = _need(instance.points if instance is not None else None, "points", kind)
            return core.L1Diversity(points)
        if kind == "table":
            return core.TableDiversity.from_json(spec)
        if kind == "tree":
            return families.TreeDiversity(WeightedTree.from_json(_need(spec.get("tree"), "a tree", kind)))
        if kind == "hypergraph":
            _need(spec.get("edges"), "hyperedges", kind)
            return families.HypergraphSteinerDiversity(families.WeightedHypergraph.from_json(
                {"n": spec.get("n", n), "edges": spec["edges"]}))
        if kind == "partition":
            return families.PartitionDiversity(families.Partition.from_json(
                {"blocks": _need(spec.get("blocks"), "blocks", kind)}, n))
        if kind == "symmetric":
            return families.SymmetricDiversity(families.SymmetricProfile(_need(spec.get("f"), "a profile f", kind)))
        if kind == "combination":
            parts = [build_oracle(part, instance) for part in _need(spec.get("parts"), "parts", kind)]
            return core.combine(spec["weights"], parts)
        return cls(_need(n, "n", kind))
    except (KeyError, TypeError) as e:
        raise InstanceError("Malformed '{}' diversity: {}".format(kind, e)) from e


##################
### GENERATORS ###
##################

def euclidean_points(n, rng, dim=2, **_):
    """Uniform points in the unit cube; Euclidean distances; Steiner diversity."""
    points = rng.uniform(0.0, 1.0, size=(n, dim))
    return Instance(n, {"kind": "steiner"}, metric=cdist(points, points), points=points)


def l1_points(n, rng, dim=2, **_):
    """Uniform points in the unit cube; l1 distances; their l1 diversity."""
    points = rng.uniform(0.0, 1.0, size=(n, dim))
    return Instance(n, {"kind": "l1"}, metric=cdist(points, points, metric="cityblock"), points=points)


def random_graph_shortest_path(n, rng, p=0.3, **_):
    """
    A G(n, p) graph with weights in [1, 10), its components chained by extra edges; the
    shortest-path metric with the Steiner diversity.
    """
    graph = nx.gnp_random_graph(n, p, seed=int(rng.integers(0, 2 ** 31)))
    components = [sorted(c) for c in nx.connected_components(graph)]
    for a, b in zip(components, components[1:]):
        graph.add_edge(int(rng.choice(a)), int(rng.choice(b)))
    for u, v in sorted(graph.edges):
        graph[u][v]["weight"] = float(rng.uniform(1.0, 10.0))
    adjacency = nx.to_scipy_sparse_array(graph, nodelist=list(range(n)), weight="weight")
    dist = shortest_path(adjacency, method="D", directed=False)
    return Instance(n, {"kind": "steiner"}, metric=dist)


def discrete(n, rng=None, **_):
    return Instance(n, {"kind": "discrete"}, metric=core.FiniteMetric.discrete(n))


def _tree_instance(tree):
    return Instance(tree.n, {"kind": "tree", "tree": tree.to_json()}, metric=tree.leaf_distances())


def path(n, rng, **_):
    """A path through all n points with edge weights in [0.5, 2)."""
    return _tree_instance(WeightedTree.path(rng.uniform(0.5, 2.0, size=n - 1).tolist()))


def star(n, rng, **_):
    """A star centred at point 0 with edge weights in [0.5, 2)."""
    return _tree_instance(WeightedTree.star(rng.uniform(0.5, 2.0, size=n - 1).tolist()))


def random_hypergraph(n, rng, edges=None, max_size=3, weight_range=(0.5, 2.0)):
    """
    A connected hypergraph with ``edges`` hyperedges of 2..max_size vertices. A random hypertree
    is laid first (each edge joins one reached vertex to fresh ones) and the remaining edges are
    drawn at random.

    Raises:
        `InstanceError`: max_size is outside [2, n] or there are too few edges to connect n
            vertices.
    """
    if n < 2:
        raise InstanceError("A random hypergraph needs n >= 2.")
    if not 2 <= max_size <= n:
        raise InstanceError("max_size must lie in [2, {}], got {}.".format(n, max_size))
    needed = -(-(n - 1) // (max_size - 1))
    edges = needed if edges is None else int(edges)
    if edges < needed:
        raise InstanceError("{} hyperedges of at most {} vertices cannot connect {} vertices (need {}).".format(
            edges, max_size, n, needed))
    order = [int(v) for v in rng.permutation(n)]
    reached, fresh = order[:1], order[1:]
    chosen = []
    for left in range(edges, 0, -1):
        if not fresh:
            break
        low = max(1, len(fresh) - (left - 1) * (max_size - 1))
        high = min(max_size - 1, len(fresh))
        take = int(rng.integers(low, high + 1))
        members = [int(rng.choice(reached))] + fresh[:take]
        reached, fresh = reached + fresh[:take], fresh[take:]
        chosen.append(members)
    while len(chosen) < edges:
        size = int(rng.integers(2, max_size + 1))
        chosen.append([int(v) for v in rng.choice(n, size=size, replace=False)])
    return families.WeightedHypergraph(n, [(members, float(rng.uniform(*weight_range))) for members in chosen])


def hypergraph_random(n, rng, edges=None, max_size=3, **_):
    hypergraph = random_hypergraph(n, rng, edges=edges, max_size=max_size)
    spec = {"kind": "hypergraph"}
    spec.update(hypergraph.to_json())
    return Instance(n, spec)


def partition_random(n, rng, blocks=2, **_):
    """Every point in a uniformly random block, each of the ``blocks`` blocks nonempty."""
    if not 2 <= blocks <= n:
        raise InstanceError("A partition diversity needs 2 <= blocks <= n, got {} blocks for n = {}.".format(
            blocks, n))
    order = rng.permutation(n)
    label = np.empty(n, dtype=int)
    label[order[:blocks]] = np.arange(blocks)
    label[order[blocks:]] = rng.integers(0, blocks, size=n - blocks)
    parts = [np.flatnonzero(label == b).tolist() for b in range(blocks)]
    return Instance(n, {"kind": "partition", "blocks": parts})


#: Generator name (as given to ``divtool.py gen``) -> generator.
GENERATORS = {
    "euclidean-points": euclidean_points,
    "l1-points": l1_points,
    "random-graph-shortest-path": random_graph_shortest_path,
    "discrete": discrete,
    "path": path,
    "star": star,
    "hypergraph-random": hypergraph_random,
    "partition-random": partition_random,
}


def generate(kind, n, seed=None, diversity=None, **params):
    """
    Runs a generator.

    Args:
        kind: `str`. A key of `GENERATORS`.
        n: `int` >= 1.
        seed: `int` or None.
        diversity: `str`. Replaces the generator's default diversity kind (metric and point
            generators only).
        params: Generator parameters (dim, p, edges, max_size, blocks); None values are dropped.

    Returns:
        `Instance`.

    Raises:
        `InstanceError`: Unknown generator or unusable parameters.
    """
    if kind not in GENERATORS:
        raise InstanceError("Unknown generator '{}'. Known generators: {}.".format(kind, ", ".join(GENERATORS)))
    if int(n) < 1:
        raise InstanceError("Instances need n >= 1, got {}.".format(n))
    params = {k: v for k, v in params.items() if v is not None}
    instance = GENERATORS[kind](int(n), utils.derive_rng(seed), **params)
    if diversity is not None:
        cls = core.OracleMeta.lookup(diversity)
        instance.spec = {"kind": cls.KIND}
        instance.diversity()
    instance.source = {"generator": kind, "seed": seed}
    instance.source.update(params)
    debug_logger.debug("Generated %s with %s (seed %s)", instance, kind, seed)
    return instance


#######################
### RANDOM ORACLES ###
#######################

def random_metric(n, rng, dim=None):
    """Euclidean distances between uniform points in a cube of dimension 1..4."""
    dim = dim or int(rng.integers(1, 5))
    points = rng.uniform(0.0, 1.0, size=(n, dim))
    return core.FiniteMetric(cdist(points, points))


def random_tree(n, rng):
    """A random labelled tree on n vertices (Prüfer sequence), every vertex placed."""
    if n == 1:
        return WeightedTree(1, [], [0])
    graph = nx.from_prufer_sequence(rng.integers(0, n, size=n - 2).tolist()) if n > 2 else nx.path_graph(2)
    edges = [(u, v, float(rng.uniform(0.5, 2.0))) for u, v in sorted(graph.edges)]
    return WeightedTree(n, edges, list(range(n)))


def random_diversity(n, rng):
    """
    A random diversity on n points: one of the Steiner, diameter, tree, hypergraph Steiner
    (stored as a table), discrete and cardinality families, TSP for n <= 7, or a positive
    combination of two of them.

    Returns:
        `diversipy.core.DiversityOracle`.
    """
    def one():
        choices = ["steiner", "diameter", "tree", "table", "discrete", "cardinality"]
        if n <= 7:
            choices.append("tsp")
        pick = choices[int(rng.integers(0, len(choices)))]
        if pick == "steiner":
            return families.SteinerDiversity(random_metric(n, rng))
        if pick == "diameter":
            return families.DiameterDiversity(random_metric(n, rng))
        if pick == "tsp":
            return families.TspDiversity(random_metric(n, rng))
        if pick == "tree":
            return families.TreeDiversity(random_tree(n, rng))
        if pick == "table":
            k = min(n, int(rng.integers(2, 5)))
            hypergraph = random_hypergraph(n, rng, edges=-(-(n - 1) // (k - 1)) + int(rng.integers(0, 4)),
                                           max_size=k)
            return core.TableDiversity.from_oracle(families.HypergraphSteinerDiversity(hypergraph))
        if pick == "discrete":
            return families.DiscreteDiversity(n)
        return families.CardinalityDiversity(n)

    if n < 2:
        return families.DiscreteDiversity(max(n, 1))
    if rng.uniform() < 0.3:
        weights = rng.uniform(0.1, 1.0, size=2).tolist()
        return core.combine(weights, [one(), one()])
    return one()
