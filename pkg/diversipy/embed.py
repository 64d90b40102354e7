# -*- coding: utf-8 -*-

"""
Embeddings of diversities into l1: the coordinate embedding (distortion at most n), FRT random
trees averaged into one l1 point set, the hypergraph-to-graph reduction, Bourgain's metric
embedding and the generalised Bourgain scheme with per-set weights.

Every constructor returns a `diversipy.core.PointEmbedding` whose rows are the images of the
ground points; evaluate it with `diversipy.core.eval_l1_diversity` or compare it to a source
diversity with `diversipy.distortion`. Randomised constructions take a ``seed`` and are
reproducible bit for bit.
"""

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

import diversipy
from diversipy import core
from diversipy import utils
from diversipy.trees import WeightedTree

debug_logger = logging.getLogger(diversipy.DEBUG_LOGGER_NAME)

METRIC_DISTANCE = "metric-distance"
SET_AUGMENTED = "set-augmented"
SCHEME_CHOICES = (METRIC_DISTANCE, SET_AUGMENTED)

#: Relative slack of the FRT dominance postcondition.
DOMINANCE_RTOL = 1e-12


class DominanceError(core.DiversityError):
    """
    Raised when a sampled tree is shorter than the source metric on some pair. The sampler
    guarantees dominance, so this signals a bug rather than bad input.
    """


class SchemeError(core.DiversityError):
    """
    Raised for unusable scheme weights: negative or non-finite weights, an unknown mapping
    choice, or the empty set under the metric-distance choice.
    """


def _pair_matrix(oracle):
    """δ({x, y}) for every pair, without validating that it is a metric."""
    n = oracle.n
    pairs = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            pairs[i, j] = pairs[j, i] = oracle((1 << i) | (1 << j))
    return pairs


def _as_dist(d):
    return d.dist if isinstance(d, core.FiniteMetric) else core.validate_metric(d).dist


##################
### COORDINATE ###
##################

def coordinate_embed(oracle):
    """
    Maps x to (d(x, x_1), ..., d(x, x_n)) for the induced metric d. For any diversity δ this
    satisfies δ(A) <= δ̂(A) <= n·δ(A).

    Args:
        oracle: `diversipy.core.DiversityOracle`.

    Returns:
        `diversipy.core.PointEmbedding` with k = n.
    """
    return core.PointEmbedding(_pair_matrix(oracle), method="coordinate")


###########
### FRT ###
###########

def frt_sample_tree(d, seed=None):
    """
    Samples a tree dominating d by hierarchical ball partitioning.

    A random permutation orders the centres and β is drawn log-uniformly from [1, 2). The top
    cluster X sits at level L = ⌈log2 diam⌉ + 1. A level-(i+1) cluster is split into level-i
    clusters by handing each of its points to the first centre, in permutation order, within
    β·2^(i-1) of it; levels where nothing splits are skipped. Each level-i child hangs from its
    parent by an edge of weight β·2^i, and a one-point cluster becomes a leaf at once. Unplaced
    vertices of degree 2 are suppressed, so two points give a single edge of weight in [2d, 4d).

    Args:
        d: `diversipy.core.FiniteMetric` or distance matrix.
        seed: `int`, `numpy.random.Generator` or None.

    Returns:
        `diversipy.trees.WeightedTree` with one leaf per ground point.

    Raises:
        `DominanceError`: A pair came out shorter on the tree than in d.
    """
    dist = _as_dist(d)
    n = dist.shape[0]
    if n == 1:
        return WeightedTree(1, [], [0])
    rng = utils.derive_rng(seed)
    perm = rng.permutation(n)
    beta = 2.0 ** rng.uniform(0.0, 1.0)
    top = int(np.ceil(np.log2(dist.max()))) + 1
    by_centre = dist[perm]

    def split(members, level):
        within = by_centre[:, members] <= beta * 2.0 ** (level - 1)
        first = within.argmax(axis=0)
        return [members[first == c] for c in np.unique(first)]

    edges = []
    placement = [0] * n
    count = 1
    stack = [(0, np.arange(n), top)]
    while stack:
        vertex, members, level = stack.pop()
        level -= 1
        parts = split(members, level)
        while len(parts) == 1:
            level -= 1
            parts = split(members, level)
        weight = beta * 2.0 ** level
        for part in parts:
            child = count
            count += 1
            edges.append((vertex, child, weight))
            if len(part) == 1:
                placement[int(part[0])] = child
            else:
                stack.append((child, part, level))
    tree = WeightedTree(count, edges, placement).suppress_degree_two()
    _check_dominance(dist, tree)
    return tree


def _check_dominance(dist, tree):
    tree_dist = tree.leaf_distances()
    short = tree_dist < dist * (1.0 - DOMINANCE_RTOL)
    if short.any():
        i, j = (int(x) for x in np.argwhere(short)[0])
        raise DominanceError("Tree distance {} < metric distance {} for pair ({}, {}).".format(
            tree_dist[i, j], dist[i, j], i, j))


@dataclass(frozen=True, eq=False)
class TreeEnsemble:
    """
    Independently sampled FRT trees over one metric. Construction re-checks that every tree
    dominates the metric.
    """
    trees: list
    metric: core.FiniteMetric
    seed: int = None

    def __post_init__(self):
        if not self.trees:
            raise ValueError("A tree ensemble needs at least one tree.")
        for tree in self.trees:
            _check_dominance(self.metric.dist, tree)

    @property
    def m(self):
        return len(self.trees)

    def to_json(self):
        return {"seed": self.seed, "trees": [t.to_json() for t in self.trees]}


def sample_ensemble(d, m=None, seed=None):
    """
    Samples m FRT trees; tree i draws from ``utils.derive_rng(seed, i)``.

    Args:
        d: `diversipy.core.FiniteMetric`.
        m: `int`. Defaults to `diversipy.DEFAULT_ENSEMBLE_SIZE`.
        seed: `int` or None.

    Returns:
        `TreeEnsemble`.
    """
    if not isinstance(d, core.FiniteMetric):
        d = core.validate_metric(d)
    m = diversipy.DEFAULT_ENSEMBLE_SIZE if m is None else int(m)
    if m < 1:
        raise ValueError("The ensemble size must be at least 1, got {}.".format(m))
    trees = [frt_sample_tree(d, utils.derive_rng(seed, i)) for i in range(m)]
    debug_logger.debug("Sampled %d FRT trees over %d points (seed %s)", m, d.n, seed)
    return TreeEnsemble(trees, d, seed)


def tree_to_l1(tree):
    """
    One coordinate per tree edge: the edge weight on the ground points below the edge, 0 on
    the rest. The l1 diversity of the result equals the tree diversity on every subset.

    Args:
        tree: `diversipy.trees.WeightedTree`.

    Returns:
        `diversipy.core.PointEmbedding`.
    """
    sides = tree.split_sides()
    coords = np.zeros((tree.n, len(sides)))
    for j, (weight, side) in enumerate(sides):
        coords[utils.members(side), j] = weight
    return core.PointEmbedding(coords, method="tree")


def ensemble_embed(ensemble):
    """The empirical mean of the ensemble's tree diversities, as one l1 point set."""
    coords = np.hstack([tree_to_l1(t).coords for t in ensemble.trees]) / ensemble.m
    return core.PointEmbedding(coords, method="frt", seed=ensemble.seed, params={"m": ensemble.m})


def frt_embed(d, m=None, seed=None):
    """
    Concatenates the tree coordinates of m FRT samples, each scaled by 1/m. The result never
    falls below the Steiner diversity of d, and for m = 1 it is exactly ``tree_to_l1`` of the
    single sample.

    Args:
        d: `diversipy.core.FiniteMetric`.
        m: `int`. Defaults to `diversipy.DEFAULT_ENSEMBLE_SIZE`.
        seed: `int` or None.

    Returns:
        `diversipy.core.PointEmbedding`.
    """
    return ensemble_embed(sample_ensemble(d, m, seed))


##################
### HYPERGRAPH ###
##################

def hypergraph_to_graph(hypergraph):
    """
    Replaces every hyperedge U by a star centred at its smallest vertex, each star edge weighted
    w(U). The Steiner diversity of the resulting shortest-path metric lies between δ_H and
    (k-1)·δ_H.

    Args:
        hypergraph: `diversipy.families.WeightedHypergraph`.

    Returns:
        (metric, edges): `diversipy.core.FiniteMetric` and the list of (u, v, weight) star edges,
        parallel edges included.
    """
    edges = []
    for mask, weight in hypergraph.edges:
        centre, *leaves = utils.members(mask)
        edges.extend((centre, v, weight) for v in leaves)
    lightest = {}
    for u, v, w in edges:
        lightest[(u, v)] = min(w, lightest.get((u, v), np.inf))
    n = hypergraph.n
    rows = [u for u, _ in lightest]
    cols = [v for _, v in lightest]
    adjacency = csr_matrix((list(lightest.values()), (rows, cols)), shape=(n, n))
    dist = shortest_path(adjacency, method="D", directed=False)
    return core.FiniteMetric(dist), edges


def hypergraph_frt_embed(hypergraph, m=None, seed=None):
    """FRT on the star reduction of a hypergraph: distortion O(k log n) against δ_H."""
    metric, _ = hypergraph_to_graph(hypergraph)
    emb = frt_embed(metric, m, seed)
    return core.PointEmbedding(emb.coords, method="hypergraph-reduce-then-frt", seed=seed, params=emb.params)


################
### BOURGAIN ###
################

@dataclass(frozen=True)
class BourgainConfig:
    """
    Bourgain sampling parameters. ``scales`` defaults to ⌊log2 n⌋ and ``samples_per_scale`` to
    ⌈log2 n⌉ (both at least 1); scale s draws sets of 2^(s-1) points.
    """
    scales: int = None
    samples_per_scale: int = None
    seed: int = None

    def __post_init__(self):
        for name in ("scales", "samples_per_scale"):
            value = getattr(self, name)
            if value is not None and int(value) < 1:
                raise ValueError("BourgainConfig.{} must be at least 1, got {}.".format(name, value))

    def resolve(self, n):
        """The (scales, q) pair used for n points."""
        log_n = np.log2(max(n, 2))
        scales = self.scales if self.scales is not None else max(1, int(np.floor(log_n)))
        q = self.samples_per_scale if self.samples_per_scale is not None else max(1, int(np.ceil(log_n)))
        return int(scales), int(q)


def _bourgain_sets(n, cfg):
    scales, q = cfg.resolve(n)
    rng = utils.derive_rng(cfg.seed)
    sets = []
    for s in range(1, scales + 1):
        size = min(2 ** (s - 1), n)
        for _ in range(q):
            sets.append(utils.make_mask(rng.choice(n, size=size, replace=False)))
    return sets, scales * q


def bourgain_embed_metric(d, cfg=None):
    """
    Coordinates d(x, A) for random sets A of sizes 1, 2, 4, ..., each scaled by 1/(scales·q).
    Evaluated as an l1 diversity this approximates the diameter diversity of d.

    Args:
        d: `diversipy.core.FiniteMetric`.
        cfg: `BourgainConfig`.

    Returns:
        `diversipy.core.PointEmbedding`.
    """
    cfg = cfg or BourgainConfig()
    dist = _as_dist(d)
    n = dist.shape[0]
    sets, total = _bourgain_sets(n, cfg)
    coords = np.column_stack([dist[:, utils.members(a)].min(axis=1) for a in sets]) / total
    scales, q = cfg.resolve(n)
    return core.PointEmbedding(coords, method="bourgain", seed=cfg.seed,
                               params={"scales": scales, "samples_per_scale": q})


##############
### SCHEME ###
##############

@dataclass(frozen=True)
class SchemeWeights:
    """
    Weights c_A >= 0 on subsets (keyed by mask) and the choice of per-set mapping:
    "metric-distance" maps x to min_{a∈A} δ({x, a}); "set-augmented" maps x to δ(A ∪ {x}).
    """
    weights: dict = field(default_factory=dict)
    choice: str = SET_AUGMENTED

    def __post_init__(self):
        if self.choice not in SCHEME_CHOICES:
            raise SchemeError("Unknown scheme choice '{}'; use one of {}.".format(self.choice, SCHEME_CHOICES))
        weights = {}
        for subset, c in self.weights.items():
            c = float(c)
            if not np.isfinite(c) or c < 0:
                raise SchemeError("Scheme weights must be finite and nonnegative, got {}.".format(c))
            mask = utils.as_mask(subset)
            if mask == 0 and self.choice == METRIC_DISTANCE:
                raise SchemeError("The distance to the empty set is undefined.")
            weights[mask] = weights.get(mask, 0.0) + c
        object.__setattr__(self, "weights", weights)

    def nonzero(self):
        return sorted((m, c) for m, c in self.weights.items() if c > 0)

    def to_json(self):
        return {"choice": self.choice, "weights": {utils.mask_key(m): c for m, c in sorted(self.weights.items())}}


def scheme_embed(oracle, weights):
    """
    Realises the generalised Bourgain diversity B -> Σ_A c_A · max_{b1,b2∈B} |φ_A(b1) - φ_A(b2)|
    as explicit coordinates c_A·φ_A(x), one per nonzero weight.

    Args:
        oracle: `diversipy.core.DiversityOracle`.
        weights: `SchemeWeights`.

    Returns:
        `diversipy.core.PointEmbedding`; k = 0 when every weight is zero.

    Raises:
        `SchemeError`: A weighted set lies outside the ground set.
    """
    n = oracle.n
    pairs = _pair_matrix(oracle) if weights.choice == METRIC_DISTANCE else None
    columns = []
    for mask, c in weights.nonzero():
        if mask >> n:
            raise SchemeError("Weighted set {} lies outside [0, {}).".format(utils.members(mask), n))
        if weights.choice == METRIC_DISTANCE:
            phi = pairs[:, utils.members(mask)].min(axis=1)
        else:
            phi = np.array([oracle(mask | (1 << x)) for x in range(n)])
        columns.append(c * phi)
    coords = np.column_stack(columns) if columns else np.zeros((n, 0))
    return core.PointEmbedding(coords, method="scheme", params={"choice": weights.choice})


def scheme_eval(oracle, weights, subset):
    """δ̂(B) of the generalised Bourgain scheme; see `scheme_embed`."""
    return core.eval_l1_diversity(scheme_embed(oracle, weights), subset)


def uniform_singleton_weights(n, choice=SET_AUGMENTED):
    """c_{a} = 1/n on every singleton, 0 elsewhere."""
    return SchemeWeights({1 << a: 1.0 / n for a in range(n)}, choice)


def bourgain_scheme_weights(n, cfg=None):
    """
    Bourgain's random sets as scheme weights under the metric-distance choice; with the diameter
    diversity this reproduces `bourgain_embed_metric` for the same config.
    """
    sets, total = _bourgain_sets(n, cfg or BourgainConfig())
    weights = {}
    for mask in sets:
        weights[mask] = weights.get(mask, 0.0) + 1.0 / total
    return SchemeWeights(weights, METRIC_DISTANCE)
