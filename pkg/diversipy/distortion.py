# -*- coding: utf-8 -*-

"""
Measures how far the l1 diversity of an embedding is from a source diversity.

For every compared subset A the ratio r(A) = δ̂(A) / δ(A) is formed; the report carries
c2 = max r, c1 = 1/min r and the distortion c = c1·c2 together with the subsets attaining the
extremes (smallest mask on ties). The embedding is never rescaled, and c is unchanged by any
uniform positive rescaling of it.
"""

import logging
import math
from collections import namedtuple
from dataclasses import dataclass

import numpy as np

import diversipy
from diversipy import core
from diversipy import families
from diversipy import utils

debug_logger = logging.getLogger(diversipy.DEBUG_LOGGER_NAME)

EXACT = "exact"
SAMPLED = "sampled"
PAIRS = "pairs"

#: Outcome of `sandwich_check`. ``first_violation`` is the smallest failing mask (None on a
#: pass); ``side`` says which inequality failed there.
SandwichResult = namedtuple("SandwichResult", ["passed", "violation_count", "first_violation", "side", "lhs", "rhs"])

#: Outcome of `check_tree_length`.
TreeLengthCheck = namedtuple("TreeLengthCheck", ["dominates", "total_length", "bound", "holds"])


@dataclass
class DistortionReport:
    c1: float
    c2: float
    c: float
    witness_min: int = None
    witness_max: int = None
    mode: str = EXACT
    subsets_scanned: int = 0
    count: int = None
    seed: int = None

    @property
    def unbounded(self):
        return math.isinf(self.c)

    def to_json(self):
        """
        The report JSON. An unbounded distortion is written as the string "unbounded" with a
        null c1, never as a float infinity.
        """
        payload = {
            "c1": None if math.isinf(self.c1) else self.c1,
            "c2": self.c2,
            "c": "unbounded" if self.unbounded else self.c,
            "witness_min": None if self.witness_min is None else utils.members(self.witness_min),
            "witness_max": None if self.witness_max is None else utils.members(self.witness_max),
            "mode": self.mode,
            "subsets_scanned": self.subsets_scanned,
        }
        if self.mode == SAMPLED:
            payload["count"] = self.count
            payload["seed"] = self.seed
        return payload


@dataclass
class StretchStats:
    """
    Stretch d_τ(u, v) / d(u, v) of an ensemble of trees. ``pair_mean`` is the n x n matrix of
    mean stretches (0 on the diagonal); ``max_mean`` is its largest entry and ``max_single`` the
    largest stretch seen on any single tree.
    """
    pair_mean: np.ndarray
    max_mean: float
    max_single: float
    min_single: float
    samples: int

    def to_json(self):
        return {"max_mean": self.max_mean, "max_single": self.max_single, "min_single": self.min_single,
                "samples": self.samples}


def _report(masks, source, embedded, mode, **kwargs):
    """
    Builds a report from parallel sequences; ``masks`` must be ascending so the first extreme
    is the smallest mask.
    """
    source = np.asarray(source, dtype=float)
    embedded = np.asarray(embedded, dtype=float)
    if not len(masks):
        return DistortionReport(1.0, 1.0, 1.0, mode=mode, subsets_scanned=0, **kwargs)
    zero = np.flatnonzero(source <= 0)
    if zero.size:
        raise core.NotADiversityError("δ{} = {}: a diversity is positive on every set of two or more "
                                      "points.".format(utils.members(masks[zero[0]]), source[zero[0]]))
    ratio = embedded / source
    low, high = int(np.argmin(ratio)), int(np.argmax(ratio))
    c2 = float(ratio[high])
    if ratio[low] <= 0:
        c1 = c = math.inf
    else:
        c1 = float(1.0 / ratio[low])
        c = float(ratio[high] / ratio[low])
    report = DistortionReport(c1, c2, c, witness_min=int(masks[low]), witness_max=int(masks[high]), mode=mode,
                              subsets_scanned=len(masks), **kwargs)
    debug_logger.debug("Distortion (%s) over %d subsets: c = %s", mode, len(masks), c)
    return report


def _check_ground(oracle, emb):
    if oracle.n != emb.n:
        raise core.GroundSetMismatchError("The diversity has {} points, the embedding {} rows.".format(oracle.n, emb.n))


def exact_distortion(oracle, emb):
    """
    Distortion over all 2^n - n - 1 subsets with at least two points.

    Args:
        oracle: `diversipy.core.DiversityOracle`.
        emb: `diversipy.core.PointEmbedding`.

    Returns:
        `DistortionReport`. When δ̂ vanishes on some set the distortion is unbounded: c and c1
        are infinite and ``witness_min`` is that set.

    Raises:
        `diversipy.core.NotADiversityError`: δ is 0 on a set of two or more points.
        `diversipy.core.CapExceededError`: n exceeds `diversipy.TABLE_CAP`.
        `diversipy.core.GroundSetMismatchError`: The embedding has a different number of rows.
    """
    _check_ground(oracle, emb)
    source = oracle.table()
    embedded = core.l1_diversity_table(emb)
    masks = np.flatnonzero(utils.popcount_table(oracle.n) >= 2)
    return _report(masks, source[masks], embedded[masks], EXACT)


def sampled_distortion(oracle, emb, count, seed=None):
    """
    Distortion over every pair, the whole ground set, and ``count`` random subsets (a size drawn
    uniformly from 2..n, then a uniform set of that size), deduplicated. Never exceeds the exact
    distortion; when ``count`` reaches 2^n - n - 1 every subset is scanned and the result equals
    the exact one.

    Args:
        oracle: `diversipy.core.DiversityOracle`.
        emb: `diversipy.core.PointEmbedding`.
        count: `int` >= 1.
        seed: `int` or None.

    Returns:
        `DistortionReport` with ``mode`` "sampled".
    """
    if count < 1:
        raise ValueError("sampled_distortion needs count >= 1, got {}.".format(count))
    _check_ground(oracle, emb)
    n = oracle.n
    if n <= diversipy.TABLE_CAP and count >= (1 << n) - n - 1:
        full = exact_distortion(oracle, emb)
        full.mode, full.count, full.seed = SAMPLED, count, seed
        return full
    rng = utils.derive_rng(seed)
    chosen = {(1 << i) | (1 << j) for i in range(n) for j in range(i + 1, n)}
    chosen.add(utils.full_mask(n))
    for _ in range(count):
        size = int(rng.integers(2, n + 1))
        chosen.add(utils.make_mask(rng.choice(n, size=size, replace=False)))
    masks = sorted(chosen)
    source = [oracle(m) for m in masks]
    embedded = [core.eval_l1_diversity(emb, m) for m in masks]
    return _report(masks, source, embedded, SAMPLED, count=count, seed=seed)


def metric_distortion(d, emb):
    """
    Classical distortion of the pair distances: the l1 distance between embedded rows against
    d(x, y), over all pairs.
    """
    dist = d.dist if isinstance(d, core.FiniteMetric) else np.asarray(d, dtype=float)
    n = dist.shape[0]
    if n != emb.n:
        raise core.GroundSetMismatchError("The metric has {} points, the embedding {} rows.".format(n, emb.n))
    rows, cols = np.triu_indices(n, k=1)
    masks = [(1 << int(i)) | (1 << int(j)) for i, j in zip(rows, cols)]
    embedded = np.abs(emb.coords[rows] - emb.coords[cols]).sum(axis=1)
    order = np.argsort(masks, kind="stable")
    return _report([masks[i] for i in order], dist[rows, cols][order], embedded[order], PAIRS)


def sandwich_check(lower, mid, upper, factor=1.0, factor_side="upper"):
    """
    Checks lower(A) <= mid(A) <= factor·upper(A) on every subset (``factor_side="upper"``), or
    lower(A)/factor <= mid(A) <= upper(A) (``factor_side="lower"``).

    Args:
        lower, mid, upper: `diversipy.core.DiversityOracle` on one ground set.
        factor: `float` >= 1.
        factor_side: "upper" or "lower".

    Returns:
        `SandwichResult`.

    Raises:
        `diversipy.core.GroundSetMismatchError`: The oracles live on different ground sets.
        `diversipy.core.CapExceededError`: n exceeds `diversipy.AXIOM_CAP`.
    """
    if factor_side not in ("upper", "lower"):
        raise ValueError("factor_side must be 'upper' or 'lower', got {!r}.".format(factor_side))
    if not (lower.ground == mid.ground == upper.ground):
        raise core.GroundSetMismatchError("Sandwich oracles must share a ground set.")
    n = mid.n
    if n > diversipy.AXIOM_CAP:
        raise core.CapExceededError("Sandwich checks are capped at n = {}.".format(diversipy.AXIOM_CAP))
    lo, md, hi = lower.table(), mid.table(), upper.table()
    if factor_side == "upper":
        hi = factor * hi
    else:
        lo = lo / factor
    below = lo > md + core.tolerance(lo, md)
    above = md > hi + core.tolerance(md, hi)
    bad = below | above
    if not bad.any():
        return SandwichResult(True, 0, None, None, None, None)
    first = int(np.flatnonzero(bad)[0])
    if below[first]:
        side, lhs, rhs = "lower", float(lo[first]), float(md[first])
    else:
        side, lhs, rhs = "upper", float(md[first]), float(hi[first])
    debug_logger.debug("Sandwich fails at %s (%s side): %s > %s", utils.members(first), side, lhs, rhs)
    return SandwichResult(False, int(bad.sum()), first, side, lhs, rhs)


def ensemble_stretch(d, ensemble):
    """
    Per-pair stretch statistics of a `diversipy.embed.TreeEnsemble` over the metric ``d``.

    Returns:
        `StretchStats`.
    """
    dist = d.dist if isinstance(d, core.FiniteMetric) else np.asarray(d, dtype=float)
    n = dist.shape[0]
    if not ensemble.trees:
        raise ValueError("Stretch statistics need at least one tree.")
    pair_mean = np.zeros((n, n))
    if n < 2:
        return StretchStats(pair_mean, 1.0, 1.0, 1.0, len(ensemble.trees))
    off = ~np.eye(n, dtype=bool)
    stretches = np.stack([t.leaf_distances()[off] / dist[off] for t in ensemble.trees])
    pair_mean[off] = stretches.mean(axis=0)
    return StretchStats(pair_mean, float(pair_mean.max()), float(stretches.max()), float(stretches.min()),
                        len(ensemble.trees))


def obstruction_bound(emb):
    """
    Distortions of one embedding against the discrete diversity and the cardinality diversity.
    The two share an induced metric, so no embedding serves both well: the larger of the two is
    always at least √(n-1).

    Returns:
        (c_discrete, c_cardinality, sqrt(n - 1)).
    """
    n = emb.n
    c_discrete = exact_distortion(families.DiscreteDiversity(n), emb).c
    c_cardinality = exact_distortion(families.CardinalityDiversity(n), emb).c
    return c_discrete, c_cardinality, math.sqrt(n - 1)


def phylogenetic_lower_bound(n):
    """
    ⌊n/2⌋: the least total length of a tree on which n placed points are pairwise at least 1
    apart. Pair the points up along disjoint paths, each of length at least 1.
    """
    return n // 2


def check_tree_length(tree):
    """
    Checks the total-length bound on a tree: if its placed points are pairwise at least 1 apart
    (the tree dominates the discrete metric) its total length is at least ⌊n/2⌋.

    Returns:
        `TreeLengthCheck`; ``holds`` is vacuously true on trees that don't dominate.
    """
    n = tree.n
    bound = phylogenetic_lower_bound(n)
    dist = tree.leaf_distances()
    off = ~np.eye(n, dtype=bool)
    dominates = bool(np.all(dist[off] >= 1.0 - diversipy.AXIOM_RTOL))
    length = tree.total_length
    holds = (not dominates) or length >= bound - diversipy.AXIOM_RTOL * max(1.0, bound)
    return TreeLengthCheck(dominates, length, bound, holds)
