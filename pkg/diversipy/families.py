# -*- coding: utf-8 -*-

"""
Exact oracles for the diversity families built on a metric, a tree, a hypergraph, a partition or
a cardinality profile.

Each family comes as a plain function ``family_diversity(source, A)`` and as a memoising
`diversipy.core.DiversityOracle` subclass whose ``table()`` is vectorised where the family allows
it. Steiner, TSP and hypergraph Steiner also have deliberately naive ``*_bruteforce`` versions
that the tests hold the fast ones against.
"""

import heapq
import itertools
import logging

import networkx as nx
import numpy as np

import diversipy
from diversipy import core
from diversipy import utils
from diversipy.trees import InvalidTreeError, WeightedTree

debug_logger = logging.getLogger(diversipy.DEBUG_LOGGER_NAME)


class InvalidHypergraphError(core.DiversityError):
    """
    Raised when a hypergraph has an edge with fewer than two vertices, a nonpositive weight,
    a vertex out of range, or does not connect all of its vertices.
    """


class InvalidPartitionError(core.DiversityError):
    """
    Raised when partition blocks overlap, are empty, miss a point, or when a one-block partition
    is used as a diversity.
    """


class InvalidProfileError(core.DiversityError):
    """
    Raised when a cardinality profile does not define a diversity. The failing
    `diversipy.core.AxiomReport` is kept in ``report``.
    """
    def __init__(self, msg, report=None):
        super().__init__(msg)
        self.report = report


def _metric(d):
    return d.dist if isinstance(d, core.FiniteMetric) else np.asarray(d, dtype=float)


################
### DIAMETER ###
################

def diameter_diversity(d, subset):
    """max_{a,b∈A} d(a, b); 0 for |A| <= 1."""
    dist = _metric(d)
    rows = utils.members(utils.as_mask(subset, dist.shape[0]))
    if len(rows) <= 1:
        return 0.0
    return float(dist[np.ix_(rows, rows)].max())


class DiameterDiversity(core.DiversityOracle):

    def __init__(self, metric):
        super().__init__(metric.ground)
        self.metric = metric

    def _evaluate(self, mask):
        return diameter_diversity(self.metric, mask)

    def _table(self):
        dist = self.metric.dist
        table = np.zeros(1 << self.n)
        for b in range(1, self.n):
            lo = 1 << b
            table[lo:2 * lo] = np.maximum(table[:lo], utils.subset_max_table(dist[b, :b]))
        return table

    def params(self):
        return {"metric": self.metric.to_json()}


###############
### STEINER ###
###############

def _dreyfus_wagner(dist, terminals):
    """
    Dreyfus-Wagner over every vertex of the complete graph ``dist`` (a metric, so already its own
    shortest-path closure). Returns the table dp with dp[S, v] the weight of a minimum tree
    connecting terminal subset S together with vertex v.
    """
    t = len(terminals)
    n = dist.shape[0]
    dp = np.full((1 << t, n), np.inf)
    dp[0] = 0.0
    for i, term in enumerate(terminals):
        dp[1 << i] = dist[term]
    for subset in range(1, 1 << t):
        if subset & (subset - 1) == 0:
            continue
        low = subset & -subset
        best = np.full(n, np.inf)
        rest = subset ^ low
        # Submasks containing the lowest bit, so every split is visited once.
        sub = rest
        while True:
            part = sub | low
            if part != subset:
                np.minimum(best, dp[part] + dp[subset ^ part], out=best)
            if sub == 0:
                break
            sub = (sub - 1) & rest
        dp[subset] = (best[:, None] + dist).min(axis=0)
    return dp


def steiner_diversity(d, subset):
    """
    Weight of a minimum Steiner tree for A in the complete graph on X weighted by d, with Steiner
    points drawn from X.

    Args:
        d: `diversipy.core.FiniteMetric`.
        subset: `int` mask or iterable of indices.

    Returns:
        `float`; 0 for |A| <= 1 and d(a, b) for A = {a, b}.

    Raises:
        `diversipy.core.CapExceededError`: |A| exceeds `diversipy.STEINER_CAP`.
    """
    dist = _metric(d)
    terminals = utils.members(utils.as_mask(subset, dist.shape[0]))
    if len(terminals) <= 1:
        return 0.0
    if len(terminals) == 2:
        return float(dist[terminals[0], terminals[1]])
    if len(terminals) > diversipy.STEINER_CAP:
        raise core.CapExceededError("Dreyfus-Wagner is capped at {} terminals (got {}).".format(
            diversipy.STEINER_CAP, len(terminals)))
    dp = _dreyfus_wagner(dist, terminals[1:])
    return float(dp[-1][terminals[0]])


def steiner_table(d):
    """
    Steiner diversity of every subset of X from one Dreyfus-Wagner run with all of X as
    terminals: δ_S(A) = min_v dp[A, v].

    Raises:
        `diversipy.core.CapExceededError`: n exceeds `diversipy.STEINER_CAP`.
    """
    dist = _metric(d)
    n = dist.shape[0]
    if n > diversipy.STEINER_CAP:
        raise core.CapExceededError("Full Steiner tables are capped at n = {}.".format(diversipy.STEINER_CAP))
    dp = _dreyfus_wagner(dist, list(range(n)))
    table = dp.min(axis=1)
    table[utils.popcount_table(n) <= 1] = 0.0
    return table


def steiner_diversity_bruteforce(d, subset):
    """
    Minimum, over all supersets S of A within X, of the minimum spanning tree weight of S.
    Exponential in n; for cross-checking only.
    """
    dist = _metric(d)
    n = dist.shape[0]
    mask = utils.as_mask(subset, n)
    if utils.popcount(mask) <= 1:
        return 0.0
    others = [i for i in range(n) if not mask >> i & 1]
    best = np.inf
    for r in range(len(others) + 1):
        for extra in itertools.combinations(others, r):
            nodes = utils.members(mask) + list(extra)
            graph = nx.Graph()
            for a, b in itertools.combinations(nodes, 2):
                graph.add_edge(a, b, weight=dist[a, b])
            weight = nx.minimum_spanning_tree(graph).size(weight="weight")
            best = min(best, weight)
    return float(best)


class SteinerDiversity(core.DiversityOracle):

    def __init__(self, metric):
        super().__init__(metric.ground)
        self.metric = metric

    def _evaluate(self, mask):
        return steiner_diversity(self.metric, mask)

    def _table(self):
        debug_logger.debug("Dreyfus-Wagner table over all %d points", self.n)
        return steiner_table(self.metric)

    def params(self):
        return {"metric": self.metric.to_json()}


############
### TREE ###
############

def tree_diversity(tree, subset):
    """
    Length of the smallest subtree of ``tree`` spanning the placements of A.

    Raises:
        `diversipy.trees.InvalidTreeError`: A member of A has no placement on the tree.
    """
    try:
        mask = utils.as_mask(subset, tree.n)
    except IndexError as e:
        raise InvalidTreeError("Subset has a point not placed on the tree: {}".format(e)) from e
    return tree.subtree_length(mask)


class TreeDiversity(core.DiversityOracle):

    def __init__(self, tree):
        super().__init__(core.GroundSet(tree.n))
        self.tree = tree

    def _evaluate(self, mask):
        return self.tree.subtree_length(mask)

    def params(self):
        return {"tree": self.tree.to_json()}


##################
### HYPERGRAPH ###
##################

class WeightedHypergraph():

    def __init__(self, n, edges):
        """
        Args:
            n: `int`. Vertex count.
            edges: list of (vertices, weight); vertices is an iterable of indices or a mask.

        Raises:
            `InvalidHypergraphError`: An edge has fewer than 2 vertices or a nonpositive weight,
                or the edges do not connect all n vertices.
        """
        self.n = int(n)
        self.edges = []
        for vertices, weight in edges:
            try:
                mask = utils.as_mask(vertices, self.n)
            except IndexError as e:
                raise InvalidHypergraphError(str(e)) from e
            if utils.popcount(mask) < 2:
                raise InvalidHypergraphError("Hyperedge {} has fewer than 2 vertices.".format(utils.members(mask)))
            if not weight > 0:
                raise InvalidHypergraphError("Hyperedge {} has nonpositive weight {}.".format(
                    utils.members(mask), weight))
            self.edges.append((mask, float(weight)))
        if self.n > 1 and _connected_cover(self.edges) != utils.full_mask(self.n):
            raise InvalidHypergraphError("The hyperedges do not connect all {} vertices.".format(self.n))

    @property
    def k(self):
        """The largest hyperedge size."""
        return max((utils.popcount(m) for m, _ in self.edges), default=0)

    def to_json(self):
        return {"n": self.n, "edges": [{"vertices": utils.members(m), "weight": w} for m, w in self.edges]}

    @classmethod
    def from_json(cls, payload):
        return cls(payload["n"], [(e["vertices"], e["weight"]) for e in payload["edges"]])

    def __repr__(self):
        return "<WeightedHypergraph n={} edges={} k={}>".format(self.n, len(self.edges), self.k)


def _connected_cover(edges):
    """Vertex set reached from the first edge through overlapping edges; 0 for no edges."""
    if not edges:
        return 0
    reached = edges[0][0]
    grew = True
    while grew:
        grew = False
        for mask, _ in edges:
            if mask & reached and mask & ~reached:
                reached |= mask
                grew = True
    return reached


def _cover_search(hypergraph, target=None):
    """
    Best-first search over the vertex sets of connected edge sets, in increasing total weight.
    An edge is only ever added when it overlaps the current vertex set and brings a new vertex;
    a minimal connected cover can always be built that way, so the search is exact.

    Returns:
        The weight of the cheapest connected cover of ``target`` when given, else a dict of the
        cheapest weight for every reachable vertex set.
    """
    if len(hypergraph.edges) > diversipy.HYPEREDGE_CAP:
        raise core.CapExceededError("Hypergraph Steiner is capped at {} edges (got {}).".format(
            diversipy.HYPEREDGE_CAP, len(hypergraph.edges)))
    best = {}
    heap = []
    for mask, weight in hypergraph.edges:
        if weight < best.get(mask, np.inf):
            best[mask] = weight
            heapq.heappush(heap, (weight, mask))
    while heap:
        cost, vertices = heapq.heappop(heap)
        if cost > best[vertices]:
            continue
        if target is not None and vertices & target == target:
            return cost
        for mask, weight in hypergraph.edges:
            if mask & vertices and mask & ~vertices:
                grown = vertices | mask
                if cost + weight < best.get(grown, np.inf):
                    best[grown] = cost + weight
                    heapq.heappush(heap, (cost + weight, grown))
    if target is not None:
        raise InvalidHypergraphError("No connected sub-hypergraph covers {}.".format(utils.members(target)))
    return best


def hypergraph_steiner(hypergraph, subset):
    """
    Minimum total weight of a connected sub-hypergraph whose vertices include A.

    Args:
        hypergraph: `WeightedHypergraph`.
        subset: `int` mask or iterable of indices.

    Returns:
        `float`; 0 for |A| <= 1.

    Raises:
        `diversipy.core.CapExceededError`: More than `diversipy.HYPEREDGE_CAP` edges.
        `InvalidHypergraphError`: A is not coverable.
    """
    mask = utils.as_mask(subset, hypergraph.n)
    if utils.popcount(mask) <= 1:
        return 0.0
    return float(_cover_search(hypergraph, mask))


def hypergraph_steiner_table(hypergraph):
    """δ_H over every mask: cheapest reachable vertex set, then a superset-minimum pass."""
    n = hypergraph.n
    cover = np.full(1 << n, np.inf)
    for vertices, cost in _cover_search(hypergraph).items():
        cover[vertices] = cost
    masks = np.arange(1 << n, dtype=np.int64)
    for b in range(n):
        bit = 1 << b
        without = masks[(masks & bit) == 0]
        cover[without] = np.minimum(cover[without], cover[without | bit])
    cover[utils.popcount_table(n) <= 1] = 0.0
    return cover


def hypergraph_steiner_bruteforce(hypergraph, subset):
    """Enumerates every edge subset; for cross-checking only."""
    mask = utils.as_mask(subset, hypergraph.n)
    if utils.popcount(mask) <= 1:
        return 0.0
    if len(hypergraph.edges) > diversipy.HYPEREDGE_CAP:
        raise core.CapExceededError("Hypergraph Steiner is capped at {} edges.".format(diversipy.HYPEREDGE_CAP))
    best = np.inf
    for r in range(1, len(hypergraph.edges) + 1):
        for chosen in itertools.combinations(hypergraph.edges, r):
            weight = sum(w for _, w in chosen)
            if weight >= best:
                continue
            union = 0
            for m, _ in chosen:
                union |= m
            if union & mask == mask and _connected_cover(list(chosen)) == union:
                best = weight
    if best == np.inf:
        raise InvalidHypergraphError("No connected sub-hypergraph covers {}.".format(utils.members(mask)))
    return float(best)


class HypergraphSteinerDiversity(core.DiversityOracle):
    KIND = "hypergraph"

    def __init__(self, hypergraph):
        super().__init__(core.GroundSet(hypergraph.n))
        self.hypergraph = hypergraph

    def _evaluate(self, mask):
        return hypergraph_steiner(self.hypergraph, mask)

    def _table(self):
        return hypergraph_steiner_table(self.hypergraph)

    def params(self):
        return self.hypergraph.to_json()


############
### BALL ###
############

def ball_diversity(d, subset):
    """
    Diameter of the smallest ball centred at a point of X containing A:
    2 · min_{x∈X} max_{a∈A} d(x, a); 0 for |A| <= 1.
    """
    dist = _metric(d)
    rows = utils.members(utils.as_mask(subset, dist.shape[0]))
    if len(rows) <= 1:
        return 0.0
    return float(2.0 * dist[:, rows].max(axis=1).min())


class BallDiversity(core.DiversityOracle):
    """
    Ball diversity with centres ranging over X. Not every metric makes this a diversity;
    run `diversipy.core.check_diversity_axioms` rather than assuming axiom (iii).
    """

    def __init__(self, metric):
        super().__init__(metric.ground)
        self.metric = metric

    def _evaluate(self, mask):
        return ball_diversity(self.metric, mask)

    def _table(self):
        radius = np.full(1 << self.n, np.inf)
        for x in range(self.n):
            np.minimum(radius, utils.subset_max_table(self.metric.dist[x]), out=radius)
        table = 2.0 * radius
        table[utils.popcount_table(self.n) <= 1] = 0.0
        return table

    def params(self):
        return {"metric": self.metric.to_json()}


###########
### TSP ###
###########

def _held_karp(dist, points):
    start, others = points[0], points[1:]
    m = len(others)
    sub = dist[np.ix_(others, others)]
    dp = np.full((1 << m, m), np.inf)
    for j, o in enumerate(others):
        dp[1 << j, j] = dist[start, o]
    for visited in range(1, 1 << m):
        if visited & (visited - 1) == 0:
            continue
        for j in utils.iter_members(visited):
            prev = visited ^ (1 << j)
            dp[visited, j] = np.min(dp[prev] + sub[:, j])
    return float(np.min(dp[-1] + dist[others, start]))


def tsp_diversity(d, subset):
    """
    Length of the shortest closed tour through A (Held-Karp).

    Returns:
        `float`; 0 for |A| <= 1 and 2·d(a, b) for A = {a, b}.

    Raises:
        `diversipy.core.CapExceededError`: |A| exceeds `diversipy.TSP_CAP`.
    """
    dist = _metric(d)
    points = utils.members(utils.as_mask(subset, dist.shape[0]))
    if len(points) <= 1:
        return 0.0
    if len(points) > diversipy.TSP_CAP:
        raise core.CapExceededError("Held-Karp is capped at {} points (got {}).".format(diversipy.TSP_CAP, len(points)))
    return _held_karp(dist, points)


def tsp_diversity_bruteforce(d, subset):
    """Enumerates every tour; for cross-checking only."""
    dist = _metric(d)
    points = utils.members(utils.as_mask(subset, dist.shape[0]))
    if len(points) <= 1:
        return 0.0
    start = points[0]
    best = np.inf
    for order in itertools.permutations(points[1:]):
        tour = (start,) + order + (start,)
        best = min(best, sum(dist[a, b] for a, b in zip(tour, tour[1:])))
    return float(best)


class TspDiversity(core.DiversityOracle):

    def __init__(self, metric):
        super().__init__(metric.ground)
        self.metric = metric

    def _evaluate(self, mask):
        return tsp_diversity(self.metric, mask)

    def params(self):
        return {"metric": self.metric.to_json()}


#################
### PARTITION ###
#################

class Partition():

    def __init__(self, blocks, n=None):
        """
        Args:
            blocks: list of lists of point indices.
            n: `int`. Ground set size; defaults to the number of points in the blocks.

        Raises:
            `InvalidPartitionError`: Blocks are empty, overlap, or miss a point.
        """
        self.blocks = [sorted(int(i) for i in block) for block in blocks]
        covered = sorted(i for block in self.blocks for i in block)
        self.n = int(n) if n is not None else len(covered)
        if any(not block for block in self.blocks):
            raise InvalidPartitionError("Partition blocks must be nonempty.")
        if covered != list(range(self.n)):
            raise InvalidPartitionError("Blocks {} do not partition [0, {}).".format(self.blocks, self.n))
        self.block_masks = [utils.make_mask(block) for block in self.blocks]

    @classmethod
    def split(cls, side, n):
        """The two-block partition {side, X∖side}."""
        side = utils.as_mask(side, n)
        return cls([utils.members(side), utils.members(utils.full_mask(n) & ~side)], n)

    def to_json(self):
        return {"blocks": self.blocks}

    @classmethod
    def from_json(cls, payload, n=None):
        return cls(payload["blocks"], n)


def partition_diversity(partition, subset):
    """1 if A meets at least two blocks of the partition, else 0."""
    mask = utils.as_mask(subset, partition.n)
    touched = sum(1 for block in partition.block_masks if block & mask)
    return 1.0 if touched >= 2 else 0.0


class PartitionDiversity(core.DiversityOracle):

    def __init__(self, partition):
        if partition.n >= 2 and len(partition.blocks) < 2:
            raise InvalidPartitionError("A one-block partition diversity is identically 0 and fails axiom (ii).")
        super().__init__(core.GroundSet(partition.n))
        self.partition = partition

    def _evaluate(self, mask):
        return partition_diversity(self.partition, mask)

    def _table(self):
        masks = np.arange(1 << self.n, dtype=np.int64)
        touched = sum(((masks & block) != 0).astype(int) for block in self.partition.block_masks)
        return (touched >= 2).astype(float)

    def params(self):
        return self.partition.to_json()


def split_diversity(side, n):
    return PartitionDiversity(Partition.split(side, n))


def split_decomposition(emb):
    """
    Writes the l1 diversity of an embedding as a nonnegative combination of split diversities:
    each coordinate contributes, for every gap between consecutive distinct values, the split
    "at most the lower value | the rest" weighted by the gap.

    Args:
        emb: `diversipy.core.PointEmbedding` or n x k array.

    Returns:
        (weights, parts): list of `float` and list of `PartitionDiversity`, ready for
        `diversipy.core.combine`.
    """
    coords = emb.coords if isinstance(emb, core.PointEmbedding) else np.asarray(emb, dtype=float)
    n = coords.shape[0]
    weights, parts = [], []
    for column in coords.T:
        values = np.unique(column)
        for lower, upper in zip(values[:-1], values[1:]):
            weights.append(float(upper - lower))
            parts.append(split_diversity(utils.make_mask(np.flatnonzero(column <= lower)), n))
    return weights, parts


#########################
### CARDINALITY-BASED ###
#########################

def discrete_diversity(subset):
    """δ_ρ: 1 on every set with two or more points."""
    return 1.0 if utils.popcount(utils.as_mask(subset)) > 1 else 0.0


def cardinality_diversity(subset):
    """δ_c: |A| - 1 on every set with two or more points."""
    size = utils.popcount(utils.as_mask(subset))
    return float(size - 1) if size >= 2 else 0.0


class DiscreteDiversity(core.DiversityOracle):

    def _evaluate(self, mask):
        return discrete_diversity(mask)

    def _table(self):
        return (utils.popcount_table(self.n) >= 2).astype(float)

    def params(self):
        return {"n": self.n}


class CardinalityDiversity(core.DiversityOracle):

    def _evaluate(self, mask):
        return cardinality_diversity(mask)

    def _table(self):
        return np.maximum(utils.popcount_table(self.n) - 1, 0).astype(float)

    def params(self):
        return {"n": self.n}


class SymmetricProfile():

    def __init__(self, f):
        """
        Args:
            f: list of n+1 `float`; f[t] is δ(A) for every |A| = t.

        Raises:
            `InvalidProfileError`: f[0] or f[1] is nonzero, some f[t] (t >= 2) is not positive, or
                the profile fails the exhaustive axiom check (report attached).
            `diversipy.core.CapExceededError`: n exceeds `diversipy.AXIOM_CAP`.
        """
        self.f = [float(x) for x in f]
        if len(self.f) < 2:
            raise InvalidProfileError("A profile needs f[0..n] with n >= 1.")
        if self.f[0] != 0 or self.f[1] != 0:
            raise InvalidProfileError("A profile must have f[0] = f[1] = 0.")
        if any(x <= 0 for x in self.f[2:]):
            raise InvalidProfileError("A profile must be positive on sizes >= 2.")
        table = core.TableDiversity(np.asarray(self.f)[utils.popcount_table(self.n)])
        report = core.check_diversity_axioms(table)
        if not report.passed:
            first = report.violations[0]
            raise InvalidProfileError("Profile {} is not a diversity: axiom ({}) fails at {}.".format(
                self.f, first.axiom, [utils.members(m) for m in first.witnesses]), report)

    @property
    def n(self):
        return len(self.f) - 1

    def to_json(self):
        return {"f": self.f}


def symmetric_diversity(profile, subset):
    return profile.f[utils.popcount(utils.as_mask(subset, profile.n))]


class SymmetricDiversity(core.DiversityOracle):

    def __init__(self, profile):
        super().__init__(core.GroundSet(profile.n))
        self.profile = profile

    def _evaluate(self, mask):
        return symmetric_diversity(self.profile, mask)

    def _table(self):
        return np.asarray(self.profile.f)[utils.popcount_table(self.n)]

    def params(self):
        return self.profile.to_json()


def cardinality_ratio_bound(oracle):
    """
    K = max over t >= 2 of (max_{|A|=t} δ(A)) / (min_{|A|=t} δ(A)). Symmetric diversities have
    K = 1; an oracle with K bounded embeds with distortion O(K).
    """
    table = oracle.table()
    sizes = utils.popcount_table(oracle.n)
    ratio = 1.0
    for t in range(2, oracle.n + 1):
        values = table[sizes == t]
        low = values.min()
        if low <= 0:
            return np.inf
        ratio = max(ratio, float(values.max() / low))
    return ratio
