# -*- coding: utf-8 -*-

"""
Ground sets, subsets, finite metrics and diversity oracles.

A diversity on a finite set X assigns a nonnegative value to every subset A of X such that
    (i)   δ(A) >= 0,
    (ii)  δ(A) = 0 if and only if |A| <= 1,
    (iii) δ(A ∪ B) <= δ(A ∪ C) + δ(B ∪ C) whenever C is nonempty.
Its induced metric is d(x, y) = δ({x, y}). The l1 diversity of points in R^k is the sum over
coordinates of the coordinate range, and is the target of every embedding in `diversipy.embed`.

Subsets are integer bit-sets throughout (see `diversipy.utils`). Every oracle is a subclass of
`DiversityOracle`; the `OracleMeta` metaclass derives each subclass's ``KIND`` tag from its class
name and registers it so instance files can name families by tag.
"""

import logging
import threading
from collections import namedtuple
from dataclasses import dataclass, field

import inflection
import numpy as np

import diversipy
from diversipy import utils

debug_logger = logging.getLogger(diversipy.DEBUG_LOGGER_NAME)


class DiversityError(Exception):
    """
    Base class of the errors raised by diversipy.
    """


class MetricValidationError(DiversityError):
    """
    Raised when a distance matrix is not a metric on distinct points. The ``violations``
    attribute lists every failed condition with its witness indices.
    """
    def __init__(self, violations, msg=None):
        self.violations = list(violations)
        if msg is None:
            msg = "Invalid metric: " + "; ".join(str(v) for v in self.violations[:10])
            if len(self.violations) > 10:
                msg += "; ... ({} violations)".format(len(self.violations))
        super().__init__(msg)


class CapExceededError(DiversityError):
    """
    Raised when an exhaustive operation is asked to run beyond its documented size cap.
    """


class NotADiversityError(DiversityError):
    """
    Raised when an operation needs δ(A) > 0 on every subset with two or more points and finds
    a zero.
    """


class GroundSetMismatchError(DiversityError):
    """
    Raised when oracles that must share a ground set don't.
    """


#: One failed metric condition. ``kind`` is one of "shape", "asymmetry", "diagonal", "negative",
#: "zero", "triangle"; ``indices`` are the witness indices (a triangle witness (i, j, k) means
#: dist[i][k] > dist[i][j] + dist[j][k]).
MetricViolation = namedtuple("MetricViolation", ["kind", "indices", "lhs", "rhs"])

#: One failed diversity axiom. For axioms "i" and "ii" ``witnesses`` is ``(A,)`` and ``lhs`` is
#: δ(A); for axiom "iii" ``witnesses`` is ``(A, B, C)`` with lhs δ(A∪B) and rhs δ(A∪C) + δ(B∪C).
AxiomViolation = namedtuple("AxiomViolation", ["axiom", "witnesses", "lhs", "rhs"])


def tolerance(lhs, rhs):
    """The comparison slack ``AXIOM_RTOL * max(1, |lhs|, |rhs|)``; works on arrays too."""
    return diversipy.AXIOM_RTOL * np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))


@dataclass(frozen=True)
class GroundSet:
    """
    The finite set X = {0, ..., n-1}, with optional display labels.
    """
    n: int
    labels: tuple = None

    def __post_init__(self):
        if int(self.n) < 1:
            raise ValueError("A ground set needs n >= 1, got {}.".format(self.n))
        if self.labels is not None:
            labels = tuple(str(x) for x in self.labels)
            if len(labels) != self.n:
                raise ValueError("Got {} labels for {} points.".format(len(labels), self.n))
            if len(set(labels)) != len(labels):
                raise ValueError("Ground set labels must be distinct.")
            object.__setattr__(self, "labels", labels)

    def __eq__(self, other):
        return isinstance(other, GroundSet) and self.n == other.n

    def __hash__(self):
        return hash(self.n)

    @property
    def full(self):
        return utils.full_mask(self.n)

    def label(self, i):
        return self.labels[i] if self.labels else str(i)


def _metric_violations(dist):
    violations = []
    if dist.ndim != 2 or dist.shape[0] != dist.shape[1]:
        return [MetricViolation("shape", tuple(dist.shape), None, None)]
    n = dist.shape[0]
    nonfinite = ~np.isfinite(dist)
    if nonfinite.any():
        return [MetricViolation("nonfinite", (int(i), int(j)), float(dist[i, j]), None)
                for i, j in zip(*np.nonzero(nonfinite))]
    tol = tolerance(dist, dist.T)
    for i, j in zip(*np.nonzero(np.abs(dist - dist.T) > tol)):
        if i < j:
            violations.append(MetricViolation("asymmetry", (int(i), int(j)), float(dist[i, j]), float(dist[j, i])))
    for i in np.flatnonzero(np.diag(dist) != 0):
        violations.append(MetricViolation("diagonal", (int(i), int(i)), float(dist[i, i]), 0.0))
    for i, j in zip(*np.nonzero(dist < 0)):
        violations.append(MetricViolation("negative", (int(i), int(j)), float(dist[i, j]), 0.0))
    off_diagonal = ~np.eye(n, dtype=bool)
    for i, j in zip(*np.nonzero((dist == 0) & off_diagonal)):
        if i < j:
            violations.append(MetricViolation("zero", (int(i), int(j)), 0.0, 0.0))
    for j in range(n):
        through = dist[:, j][:, None] + dist[j, :][None, :]
        bad = dist > through + tolerance(dist, through)
        for i, k in zip(*np.nonzero(bad)):
            if i < k and j not in (i, k):
                violations.append(MetricViolation("triangle", (int(i), int(j), int(k)),
                                                  float(dist[i, k]), float(through[i, k])))
    return violations


@dataclass(frozen=True, eq=False)
class FiniteMetric:
    """
    A metric on n distinct points, stored as a read-only n x n `numpy.ndarray`. Construction
    validates the matrix; use `validate_metric` to build one from nested lists.

    Raises:
        `MetricValidationError`: The matrix is not square, symmetric, zero exactly on the
            diagonal, nonnegative, or fails the triangle inequality.
    """
    dist: np.ndarray

    def __post_init__(self):
        dist = np.array(self.dist, dtype=float)
        violations = _metric_violations(dist)
        if violations:
            raise MetricValidationError(violations)
        dist.setflags(write=False)
        object.__setattr__(self, "dist", dist)

    @property
    def n(self):
        return self.dist.shape[0]

    @property
    def ground(self):
        return GroundSet(self.n)

    def __getitem__(self, ij):
        return self.dist[ij]

    def __eq__(self, other):
        return isinstance(other, FiniteMetric) and np.array_equal(self.dist, other.dist)

    def diameter(self):
        return float(self.dist.max())

    def min_distance(self):
        if self.n < 2:
            return 0.0
        return float(self.dist[~np.eye(self.n, dtype=bool)].min())

    def to_json(self):
        return self.dist.tolist()

    @classmethod
    def discrete(cls, n):
        """The metric with every pair at distance 1."""
        return cls(np.ones((n, n)) - np.eye(n))


def validate_metric(dist):
    """
    Validates a distance matrix.

    Args:
        dist: n x n nested sequence or `numpy.ndarray` of reals.

    Returns:
        `FiniteMetric`.

    Raises:
        `MetricValidationError`: Every violated condition is listed in ``violations``, each with
            its witness indices.
    """
    return FiniteMetric(np.asarray(dist, dtype=float))


@dataclass(frozen=True, eq=False)
class PointEmbedding:
    """
    n points in R^k (one row per ground point) plus provenance.
    """
    coords: np.ndarray
    method: str = ""
    seed: int = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        coords = np.array(self.coords, dtype=float)
        if coords.ndim == 1:
            coords = coords.reshape(-1, 1)
        if coords.ndim != 2:
            raise ValueError("Embedding coordinates must be an n x k matrix.")
        if not np.all(np.isfinite(coords)):
            raise ValueError("Embedding coordinates must be finite.")
        coords.setflags(write=False)
        object.__setattr__(self, "coords", coords)

    @property
    def n(self):
        return self.coords.shape[0]

    @property
    def k(self):
        return self.coords.shape[1]

    def scaled(self, factor):
        return PointEmbedding(self.coords * factor, method=self.method, seed=self.seed, params=dict(self.params))

    def to_json(self):
        payload = {"n": self.n, "k": self.k, "coords": self.coords.tolist(), "method": self.method}
        if self.seed is not None:
            payload["seed"] = self.seed
        if self.params:
            payload["params"] = self.params
        return payload

    @classmethod
    def from_json(cls, payload):
        n = int(payload["n"])
        k = int(payload["k"])
        coords = np.array(payload["coords"], dtype=float).reshape(n, k)
        return cls(coords, method=payload.get("method", ""), seed=payload.get("seed"),
                   params=payload.get("params", {}))


class OracleMeta(type):
    #: Maps each family tag to its oracle class.
    KINDS = {}

    def __init__(newcls, classname, supers, classdict):
        super().__init__(classname, supers, classdict)
        if "KIND" not in classdict:
            if not classname.endswith("Diversity"):
                return
            #: Family tag, i.e. "steiner" for SteinerDiversity.
            newcls.KIND = inflection.underscore(classname[:-len("Diversity")])
        if newcls.KIND:
            OracleMeta.KINDS[newcls.KIND] = newcls

    @staticmethod
    def lookup(kind):
        """
        Finds the oracle class registered for a family tag. Dasherized tags ("hypergraph-steiner")
        are accepted as well.

        Raises:
            `KeyError`: No family by that tag.
        """
        kind = inflection.underscore(kind.replace("-", "_"))
        try:
            return OracleMeta.KINDS[kind]
        except KeyError:
            raise KeyError("Unknown diversity kind '{}'. Known kinds: {}.".format(
                kind, ", ".join(sorted(OracleMeta.KINDS))))


class DiversityOracle(metaclass=OracleMeta):
    """
    The superclass of all diversity families. An instance evaluates δ(A) for any subset of its
    ground set; subclasses implement ``_evaluate(mask)`` for |A| >= 2 (smaller sets are 0 by
    definition and never reach ``_evaluate``).

    Values are memoised per mask. The memo is guarded by a lock so an oracle can be shared across
    threads; because ``_evaluate`` is deterministic, the interleaving never changes a result.
    Subclasses with a cheap vectorised form override ``_table()``.
    """
    KIND = ""

    def __init__(self, ground):
        if isinstance(ground, int):
            ground = GroundSet(ground)
        self.ground = ground
        self._cache = {}
        self._table_values = None
        self._lock = threading.Lock()

    @property
    def n(self):
        return self.ground.n

    @property
    def kind(self):
        return self.KIND

    def __call__(self, subset):
        mask = utils.as_mask(subset, self.n)
        if self._table_values is not None:
            return float(self._table_values[mask])
        if utils.popcount(mask) <= 1:
            return 0.0
        with self._lock:
            value = self._cache.get(mask)
        if value is None:
            value = float(self._evaluate(mask))
            with self._lock:
                self._cache[mask] = value
        return value

    def _evaluate(self, mask):
        raise NotImplementedError

    def table(self):
        """
        δ over every mask, indexed by mask. Computed once and kept.

        Returns:
            `numpy.ndarray` of length 2^n (read-only).

        Raises:
            `CapExceededError`: n exceeds `diversipy.TABLE_CAP`.
        """
        if self._table_values is None:
            if self.n > diversipy.TABLE_CAP:
                raise CapExceededError("Subset tables are capped at n = {} (got n = {}).".format(
                    diversipy.TABLE_CAP, self.n))
            values = np.asarray(self._table(), dtype=float)
            values.setflags(write=False)
            with self._lock:
                self._table_values = values
        return self._table_values

    def _table(self):
        values = np.zeros(1 << self.n)
        for mask in range(1 << self.n):
            if utils.popcount(mask) >= 2:
                values[mask] = self(mask)
        return values

    def params(self):
        """Kind-specific parameters for the instance JSON ``diversity`` object."""
        return {}

    def to_json(self):
        payload = {"kind": self.kind}
        payload.update(self.params())
        return payload

    def __repr__(self):
        return "<{} n={}>".format(self.__class__.__name__, self.n)


class TableDiversity(DiversityOracle):
    """
    A set function stored exhaustively: one value per mask (n <= `diversipy.TABLE_CAP`). Values are
    kept as given, singletons and the empty set included, so `check_diversity_axioms` sees them.
    """

    def __init__(self, values, ground=None):
        values = np.array(values, dtype=float)
        n = int(values.shape[0]).bit_length() - 1
        if values.ndim != 1 or n < 1 or values.shape[0] != 1 << n:
            raise ValueError("A diversity table needs exactly 2^n values, n >= 1.")
        if ground is not None and ground.n != n:
            raise GroundSetMismatchError("{} table values do not fit {} points.".format(values.shape[0], ground.n))
        if n > diversipy.TABLE_CAP:
            raise CapExceededError("Table-backed diversities are capped at n = {}.".format(diversipy.TABLE_CAP))
        super().__init__(ground if ground is not None else GroundSet(n))
        self._values = values

    def __call__(self, subset):
        return float(self._values[utils.as_mask(subset, self.n)])

    def _evaluate(self, mask):
        return self._values[mask]

    def _table(self):
        return self._values

    @classmethod
    def from_oracle(cls, oracle):
        return cls(oracle.table(), ground=oracle.ground)

    @classmethod
    def from_json(cls, payload):
        """
        Reads the diversity-table JSON ``{"n": int, "values": {"0,2": 1.5, ...}}``; omitted
        masks (the empty set, singletons, and anything else) are 0.
        """
        n = int(payload["n"])
        values = np.zeros(1 << n)
        for key, value in payload.get("values", {}).items():
            mask = utils.key_mask(key)
            if mask >> n:
                raise IndexError("Table key '{}' lies outside [0, {}).".format(key, n))
            values[mask] = float(value)
        return cls(values)

    def params(self):
        return {"n": self.n, "values": {utils.mask_key(m): float(v) for m, v in enumerate(self._values)
                                        if utils.popcount(m) >= 2 or v != 0}}


class L1Diversity(DiversityOracle):
    """
    The l1 diversity of a point set: the sum over coordinates of the coordinate range.
    """

    def __init__(self, points):
        if isinstance(points, PointEmbedding):
            points = points.coords
        self.points = PointEmbedding(points).coords
        super().__init__(GroundSet(self.points.shape[0]))

    def _evaluate(self, mask):
        return float(np.ptp(self.points[utils.members(mask)], axis=0).sum())

    def _table(self):
        return l1_diversity_table(self.points)

    def params(self):
        return {"points": self.points.tolist()}


class CombinationDiversity(DiversityOracle):
    """
    A nonnegative linear combination of diversities on one ground set.
    """

    def __init__(self, weights, parts):
        super().__init__(parts[0].ground)
        self.weights = [float(w) for w in weights]
        self.parts = list(parts)

    def _evaluate(self, mask):
        return sum(w * part(mask) for w, part in zip(self.weights, self.parts))

    def _table(self):
        return sum(w * part.table() for w, part in zip(self.weights, self.parts))

    def params(self):
        return {"weights": self.weights, "parts": [p.to_json() for p in self.parts]}


def combine(weights, parts):
    """
    Forms the diversity A -> Σ w_i · part_i(A).

    Args:
        weights: list of nonnegative `float`, at least one positive.
        parts: list of `DiversityOracle` on a common ground set.

    Returns:
        `CombinationDiversity`.

    Raises:
        `GroundSetMismatchError`: The parts live on different ground sets.
        `ValueError`: Weights and parts differ in length, a weight is negative, or all are zero.
    """
    weights = list(weights)
    parts = list(parts)
    if not parts or len(weights) != len(parts):
        raise ValueError("combine() needs one weight per part.")
    if any(w < 0 for w in weights) or not any(w > 0 for w in weights):
        raise ValueError("Combination weights must be nonnegative with at least one positive.")
    for part in parts[1:]:
        if part.ground != parts[0].ground:
            raise GroundSetMismatchError("Cannot combine diversities on {} and {} points.".format(
                parts[0].n, part.n))
    return CombinationDiversity(weights, parts)


def subset_table(oracle):
    return oracle.table()


def l1_diversity_table(coords):
    """
    The l1 diversity of every subset of the rows of ``coords``.

    Runs the subset max/min recurrences over the low 16 bits once and combines them with each
    high-bit block, so memory stays at 2^16 rows per block.

    Args:
        coords: `numpy.ndarray` of shape (n, k), or a `PointEmbedding`.

    Returns:
        `numpy.ndarray` of length 2^n.
    """
    if isinstance(coords, PointEmbedding):
        coords = coords.coords
    coords = np.asarray(coords, dtype=float)
    n, k = coords.shape
    if n > diversipy.TABLE_CAP:
        raise CapExceededError("l1 diversity tables are capped at n = {}.".format(diversipy.TABLE_CAP))
    if k == 0:
        return np.zeros(1 << n)
    low = min(n, 16)
    low_max = utils.subset_max_table(coords[:low])
    low_min = utils.subset_min_table(coords[:low])
    with np.errstate(invalid="ignore"):
        if n == low:
            out = (low_max - low_min).sum(axis=1)
        else:
            high_max = utils.subset_max_table(coords[low:])
            high_min = utils.subset_min_table(coords[low:])
            out = np.empty(1 << n)
            block = 1 << low
            for h in range(high_max.shape[0]):
                spread = np.maximum(low_max, high_max[h]) - np.minimum(low_min, high_min[h])
                out[h * block:(h + 1) * block] = spread.sum(axis=1)
    out[0] = 0.0
    return out


def eval_l1_diversity(emb, subset):
    """
    Evaluates the l1 diversity Σ_i max_{a,b∈A} |a_i - b_i| on the rows selected by ``subset``.

    Args:
        emb: `PointEmbedding` or an n x k `numpy.ndarray`.
        subset: `int` mask or iterable of row indices.

    Returns:
        `float`; 0 when |A| <= 1.

    Raises:
        `IndexError`: A member of ``subset`` is not a row index.
    """
    coords = emb.coords if isinstance(emb, PointEmbedding) else np.asarray(emb, dtype=float)
    mask = utils.as_mask(subset, coords.shape[0])
    rows = utils.members(mask)
    if len(rows) <= 1 or coords.shape[1] == 0:
        return 0.0
    return float(np.ptp(coords[rows], axis=0).sum())


@dataclass
class AxiomReport:
    """
    Outcome of `check_diversity_axioms`. ``violations`` keeps at most ``max_violations``
    witnesses in scan order; ``violation_count`` counts them all. ``passed`` is true exactly
    when nothing was found.
    """
    n: int
    violations: list = field(default_factory=list)
    violation_count: int = 0
    monotone: bool = True
    monotone_witness: tuple = None

    @property
    def passed(self):
        return self.violation_count == 0

    def to_json(self):
        return {
            "n": self.n,
            "passed": self.passed,
            "violation_count": self.violation_count,
            "violations": [{"axiom": v.axiom,
                            "witnesses": [utils.members(m) for m in v.witnesses],
                            "lhs": v.lhs, "rhs": v.rhs} for v in self.violations],
            "monotone": self.monotone,
            "monotone_witness": None if self.monotone_witness is None else [
                utils.members(m) for m in self.monotone_witness],
        }


def check_diversity_axioms(oracle, max_violations=25):
    """
    Checks axioms (i)-(iii) exhaustively and reports monotonicity separately.

    Axiom (iii) is scanned with C = {c} outermost (c ascending), then P = A∪{c} and Q = B∪{c}
    over all sets containing c, comparing max(δ(P∪Q), δ(P∪Q∖{c})) with δ(P) + δ(Q). That covers
    every triple with a singleton C, including B = ∅, which is monotonicity under adding one
    point; with monotonicity any larger C reduces to one of its points, so the scan is complete
    at n·4^(n-1) comparisons.

    Args:
        oracle: `DiversityOracle`.
        max_violations: `int`. How many witnesses to keep.

    Returns:
        `AxiomReport`.

    Raises:
        `CapExceededError`: n exceeds `diversipy.AXIOM_CAP`.
    """
    n = oracle.n
    if n > diversipy.AXIOM_CAP:
        raise CapExceededError("The axiom scan is capped at n = {} (got n = {}).".format(diversipy.AXIOM_CAP, n))
    table = oracle.table()
    sizes = utils.popcount_table(n)
    report = AxiomReport(n=n)

    def record(violation):
        report.violation_count += 1
        if len(report.violations) < max_violations:
            report.violations.append(violation)

    # (i)
    for mask in np.flatnonzero(table < -tolerance(0.0, table)):
        record(AxiomViolation("i", (int(mask),), float(table[mask]), 0.0))
    # (ii)
    small = sizes <= 1
    bad = (small & (np.abs(table) > tolerance(0.0, table))) | (~small & (table <= 0))
    for mask in np.flatnonzero(bad):
        record(AxiomViolation("ii", (int(mask),), float(table[mask]), 0.0))
    # (iii)
    for c in range(n):
        bit = 1 << c
        with_c = utils.masks_with_bit(n, c)
        rhs_q = table[with_c]
        for p in with_c:
            union = p | with_c
            lhs_full = table[union]
            lhs_drop = table[union & ~bit]
            rhs = table[p] + rhs_q
            lhs = np.maximum(lhs_full, lhs_drop)
            slack = tolerance(lhs, rhs)
            bad = lhs > rhs + slack
            count = int(bad.sum())
            if not count:
                continue
            for idx in np.flatnonzero(bad):
                if len(report.violations) >= max_violations:
                    break
                q = int(with_c[idx])
                if lhs_full[idx] > rhs[idx] + slack[idx]:
                    a, b, value = int(p), q, lhs_full[idx]
                else:
                    a, b, value = int(p) & ~bit, q & ~bit, lhs_drop[idx]
                report.violations.append(AxiomViolation("iii", (a, b, bit), float(value), float(rhs[idx])))
                report.violation_count += 1
                count -= 1
            report.violation_count += count
    # monotonicity
    first = None
    for b in range(n):
        bit = 1 << b
        without = np.arange(1 << n, dtype=np.int64)
        without = without[(without & bit) == 0]
        smaller, larger = table[without], table[without | bit]
        hits = np.flatnonzero(smaller > larger + tolerance(smaller, larger))
        if hits.size and (first is None or without[hits[0]] < first[0]):
            first = (int(without[hits[0]]), int(without[hits[0]] | bit))
    if first is not None:
        report.monotone = False
        report.monotone_witness = first
    debug_logger.debug("Axiom scan of %s: %d violations, monotone=%s", oracle, report.violation_count,
                       report.monotone)
    return report


def induced_metric(oracle):
    """
    The induced metric d(x, y) = δ({x, y}).

    Args:
        oracle: `DiversityOracle`.

    Returns:
        `FiniteMetric`.

    Raises:
        `MetricValidationError`: The pair values are not a metric, so the oracle is not a
            diversity.
    """
    n = oracle.n
    dist = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            dist[i, j] = dist[j, i] = oracle((1 << i) | (1 << j))
    try:
        return FiniteMetric(dist)
    except MetricValidationError as e:
        raise MetricValidationError(e.violations, "The pair values of {} are not a metric, so it is not a "
                                    "diversity: {}".format(oracle, e)) from e
