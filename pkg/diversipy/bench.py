# -*- coding: utf-8 -*-

"""
Scaling benchmarks: embed random instances of one family with one method over a range of n and
record the distortion of every trial, plus a summary row per n with the mean and maximum
distortion and the fitted constant max_c / growth(n) for the method's expected growth.
"""

import csv
import logging
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import diversipy
from diversipy import core
from diversipy import distortion
from diversipy import embed
from diversipy import families
from diversipy import instances
from diversipy import utils

bench_logger = logging.getLogger(diversipy.BENCH_LOGGER_NAME)
debug_logger = logging.getLogger(diversipy.DEBUG_LOGGER_NAME)

#: CSV columns, in order.
COLUMNS = ["family", "method", "n", "trial", "seed", "c1", "c2", "c", "runtime_ms", "mean_c", "max_c",
           "fit_const", "status"]

#: Expected distortion growth of each method, the denominator of ``fit_const``.
GROWTH = {
    "coordinate": lambda n: n,
    "frt": lambda n: math.log2(n),
    "hypergraph-reduce-then-frt": lambda n: math.log2(n),
    "bourgain": lambda n: math.log2(n) ** 2,
    "tree": lambda n: 1.0,
}

#: Family -> methods it can be benchmarked with.
METHODS = {
    "steiner": ("coordinate", "frt", "bourgain"),
    "diameter": ("coordinate", "frt", "bourgain"),
    "tsp": ("coordinate", "frt", "bourgain"),
    "discrete": ("coordinate", "frt", "bourgain"),
    "tree": ("coordinate", "tree", "frt"),
    "hypergraph": ("coordinate", "hypergraph-reduce-then-frt"),
    "random": ("coordinate",),
}


@dataclass(frozen=True)
class BenchPlan:
    """
    One benchmark sweep.

    Exact distortion is used up to ``exact_cap`` points and sampled distortion with ``samples``
    subsets beyond it.
    """
    family: str
    method: str
    ns: tuple
    trials: int = 20
    m: int = None
    seed: int = 0
    out: str = None
    jobs: int = 1
    samples: int = 2000
    exact_cap: int = 16

    def __post_init__(self):
        if self.family not in METHODS:
            raise ValueError("Unknown bench family '{}'. Known families: {}.".format(
                self.family, ", ".join(METHODS)))
        if self.method not in METHODS[self.family]:
            raise ValueError("Method '{}' does not apply to family '{}' (use one of {}).".format(
                self.method, self.family, ", ".join(METHODS[self.family])))
        if self.trials < 1:
            raise ValueError("A bench plan needs at least one trial per n.")
        if not self.ns or any(int(n) < 2 for n in self.ns):
            raise ValueError("Bench sizes must all be at least 2.")
        if any(int(n) > diversipy.TABLE_CAP for n in self.ns) and self.family not in ("diameter", "discrete"):
            raise core.CapExceededError("Only diameter and discrete benches go past n = {}.".format(
                diversipy.TABLE_CAP))
        object.__setattr__(self, "ns", tuple(int(n) for n in self.ns))


def _instance(family, n, rng):
    """(oracle, metric, structure) for one random trial; structure is a tree or a hypergraph."""
    if family in ("steiner", "diameter", "tsp"):
        metric = instances.random_metric(n, rng, dim=2)
        cls = {"steiner": families.SteinerDiversity, "diameter": families.DiameterDiversity,
               "tsp": families.TspDiversity}[family]
        return cls(metric), metric, None
    if family == "discrete":
        return families.DiscreteDiversity(n), core.FiniteMetric.discrete(n), None
    if family == "tree":
        tree = instances.random_tree(n, rng)
        return families.TreeDiversity(tree), core.FiniteMetric(tree.leaf_distances()), tree
    if family == "hypergraph":
        k = min(n, 3)
        hypergraph = instances.random_hypergraph(n, rng, edges=min(diversipy.HYPEREDGE_CAP, n + 2), max_size=k)
        return families.HypergraphSteinerDiversity(hypergraph), None, hypergraph
    return instances.random_diversity(n, rng), None, None


def _embedding(plan, oracle, metric, structure, seed):
    if plan.method == "coordinate":
        return embed.coordinate_embed(oracle)
    if plan.method == "frt":
        return embed.frt_embed(metric, plan.m, seed)
    if plan.method == "bourgain":
        return embed.bourgain_embed_metric(metric, embed.BourgainConfig(seed=seed))
    if plan.method == "tree":
        return embed.tree_to_l1(structure)
    return embed.hypergraph_frt_embed(structure, plan.m, seed)


def run_trial(plan, n, trial):
    """
    Runs one trial. Cap and diversity errors end up in the row's ``status`` instead of being
    raised, so a sweep always finishes.

    Returns:
        `dict` keyed by `COLUMNS`.
    """
    rng = utils.derive_rng(plan.seed, n, trial)
    seed = int(rng.integers(0, 2 ** 31))
    row = dict.fromkeys(COLUMNS, "")
    row.update(family=plan.family, method=plan.method, n=n, trial=trial, seed=seed)
    start = time.perf_counter()
    try:
        oracle, metric, structure = _instance(plan.family, n, utils.derive_rng(seed))
        emb = _embedding(plan, oracle, metric, structure, seed)
        if n <= plan.exact_cap:
            report = distortion.exact_distortion(oracle, emb)
        else:
            report = distortion.sampled_distortion(oracle, emb, plan.samples, seed)
    except core.CapExceededError as e:
        row["status"] = "cap: {}".format(e)
    except core.DiversityError as e:
        row["status"] = "error: {}".format(e)
    else:
        row.update(c1=report.c1, c2=report.c2, c="unbounded" if report.unbounded else report.c,
                   status=report.mode)
    row["runtime_ms"] = round(1000.0 * (time.perf_counter() - start), 3)
    return row


def _run_trial_args(args):
    return run_trial(*args)


def summary_row(plan, n, rows):
    """Mean and max distortion over the finished trials at one n, and max_c / growth(n)."""
    values = [r["c"] for r in rows if isinstance(r["c"], float)]
    row = dict.fromkeys(COLUMNS, "")
    row.update(family=plan.family, method=plan.method, n=n, trial="summary")
    if any(r["c"] == "unbounded" for r in rows):
        row.update(max_c="unbounded", status="unbounded")
    elif values:
        max_c = max(values)
        row.update(mean_c=sum(values) / len(values), max_c=max_c,
                   fit_const=max_c / GROWTH[plan.method](n) if plan.method in GROWTH else "", status="ok")
    else:
        row["status"] = "no finished trials"
    return row


def run_bench(plan, fh=None):
    """
    Runs a plan and writes its CSV. Trials run on ``plan.jobs`` worker processes; rows are
    written in (n, trial) order whatever order they finish in.

    Args:
        plan: `BenchPlan`.
        fh: writable text file. Defaults to ``plan.out`` or STDOUT.

    Returns:
        list of summary rows (`dict`), one per n.
    """
    tasks = [(plan, n, t) for n in plan.ns for t in range(plan.trials)]
    if fh is None and plan.out and plan.out != "-":
        with open(plan.out, "w", newline="") as fout:
            return run_bench(plan, fout)
    writer = csv.DictWriter(fh or sys.stdout, fieldnames=COLUMNS)
    writer.writeheader()
    summaries = []

    def consume(results):
        current = []
        for row in results:
            writer.writerow(row)
            bench_logger.info("%s/%s n=%s trial=%s c=%s (%s ms) %s", row["family"], row["method"], row["n"],
                              row["trial"], row["c"], row["runtime_ms"], row["status"])
            current.append(row)
            if len(current) == plan.trials:
                summary = summary_row(plan, row["n"], current)
                writer.writerow(summary)
                summaries.append(summary)
                current = []

    if plan.jobs > 1:
        with ProcessPoolExecutor(max_workers=plan.jobs) as executor:
            consume(executor.map(_run_trial_args, tasks))
    else:
        consume(map(_run_trial_args, tasks))
    debug_logger.debug("Bench %s/%s finished: %d rows", plan.family, plan.method, len(tasks))
    return summaries
