#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Generates diversity instances, checks the diversity axioms, embeds instances into l1, measures
distortion and runs scaling benchmarks.

Subcommands:
    gen         write an instance JSON file from a generator
    check       exhaustively check axioms (i)-(iii) of an instance (exit 1 on a violation)
    embed       write the embedding JSON of an instance
    distortion  measure an embedding against an instance's diversity (or another family)
    bench       write a CSV of distortions of random instances over a range of n

Exit codes: 0 success, 1 validation failure or axiom violation, 2 size cap exceeded, 3 I/O error.
"""

import argparse
import csv
import json
import logging
import sys

import diversipy
from diversipy import bench
from diversipy import core
from diversipy import distortion
from diversipy import embed
from diversipy import instances
from diversipy import utils

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_CAP = 2
EXIT_IO = 3

#: Methods accepted by ``embed --method``.
EMBED_METHODS = ["coordinate", "frt", "bourgain", "tree", "hypergraph-reduce-then-frt", "scheme"]

#: Columns of ``distortion --format csv``.
DISTORTION_COLUMNS = ["against", "mode", "c1", "c2", "c", "subsets_scanned"]

debug_logger = logging.getLogger(diversipy.DEBUG_LOGGER_NAME)
error_logger = logging.getLogger(diversipy.ERROR_LOGGER_NAME)
bench_logger = logging.getLogger(diversipy.BENCH_LOGGER_NAME)


def setup_logging():
    """
    Sends failures to STDERR and, like every logger here, to a log file under
    `diversipy.LOG_DIR`. Safe to call more than once.
    """
    if getattr(error_logger, "_divtool_ready", False):
        return
    error_logger.setLevel(logging.ERROR)
    ch = logging.StreamHandler(stream=sys.stderr)
    ch.setLevel(logging.ERROR)
    ch.setFormatter(logging.Formatter('%(name)s:\t%(message)s'))
    error_logger.addHandler(ch)
    utils.add_file_handler(logger=error_logger, level=logging.ERROR, tag="error")
    utils.add_file_handler(logger=debug_logger, level=logging.DEBUG, tag="debug")
    bench_logger.setLevel(logging.INFO)
    utils.add_file_handler(logger=bench_logger, level=logging.INFO, tag="bench")
    error_logger._divtool_ready = True


def get_parser():
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawTextHelpFormatter)
    subparsers = parser.add_subparsers(dest="command", required=True)

    gen = subparsers.add_parser("gen", help="Write an instance JSON file.")
    gen.add_argument("kind", choices=sorted(instances.GENERATORS), help="The generator.")
    gen.add_argument("--n", type=int, required=True, help="Number of points.")
    gen.add_argument("--seed", type=int, help="Random seed; the output is identical for identical flags.")
    gen.add_argument("--dim", type=int, help="Point dimension (euclidean-points, l1-points).")
    gen.add_argument("--p", type=float, help="Edge probability (random-graph-shortest-path).")
    gen.add_argument("--edges", type=int, help="Hyperedge count (hypergraph-random).")
    gen.add_argument("--max-size", type=int, help="Largest hyperedge (hypergraph-random).")
    gen.add_argument("--blocks", type=int, help="Block count (partition-random).")
    gen.add_argument("--diversity", help="""
      Replace the generator's diversity kind, i.e. diameter or ball on a point cloud.""")
    gen.add_argument("--out", default="-", help="Output file; '-' for STDOUT.")
    gen.set_defaults(func=cmd_gen)

    check = subparsers.add_parser("check", help="Check the diversity axioms of an instance.")
    check.add_argument("instance", help="Instance JSON file.")
    check.add_argument("--max-violations", type=int, default=25, help="How many witnesses to report.")
    check.add_argument("--out", default="-", help="Output file; '-' for STDOUT.")
    check.set_defaults(func=cmd_check)

    emb = subparsers.add_parser("embed", help="Embed an instance into l1.")
    emb.add_argument("instance", help="Instance JSON file.")
    emb.add_argument("--method", required=True, choices=EMBED_METHODS, help="""
      coordinate: rows of the induced metric (any diversity).
      frt: averaged FRT trees (instances with a metric).
      bourgain: Bourgain's embedding of the metric (the induced one if the instance has none).
      tree: exact embedding of a tree diversity.
      hypergraph-reduce-then-frt: star reduction of a hypergraph, then frt.
      scheme: generalised Bourgain scheme; see --choice and --weights.""")
    emb.add_argument("--m", type=int, help="Number of FRT trees (default {}).".format(diversipy.DEFAULT_ENSEMBLE_SIZE))
    emb.add_argument("--seed", type=int, help="Random seed.")
    emb.add_argument("--scales", type=int, help="Bourgain scales (default floor(log2 n)).")
    emb.add_argument("--samples-per-scale", type=int, help="Bourgain sets per scale (default ceil(log2 n)).")
    emb.add_argument("--choice", choices=embed.SCHEME_CHOICES, default=embed.SET_AUGMENTED,
                     help="Scheme mapping (scheme only).")
    emb.add_argument("--weights", choices=["uniform-singleton", "bourgain"], default="uniform-singleton",
                     help="Scheme weights (scheme only); bourgain implies --choice metric-distance.")
    emb.add_argument("--out", default="-", help="Output file; '-' for STDOUT.")
    emb.set_defaults(func=cmd_embed)

    dist = subparsers.add_parser("distortion", help="Measure the distortion of an embedding.")
    dist.add_argument("instance", help="Instance JSON file.")
    dist.add_argument("embedding", help="Embedding JSON file.")
    mode = dist.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", help="Scan every subset (the default).")
    mode.add_argument("--samples", type=int, help="Scan pairs, X and this many random subsets.")
    dist.add_argument("--seed", type=int, help="Random seed for --samples.")
    dist.add_argument("--against", help="""
      Measure against this diversity kind instead of the instance's own, i.e. steiner after an frt
      embedding of a diameter instance.""")
    dist.add_argument("--format", choices=["json", "csv"], default="json", help="Report format.")
    dist.add_argument("--out", default="-", help="Output file; '-' for STDOUT.")
    dist.set_defaults(func=cmd_distortion)

    ben = subparsers.add_parser("bench", help="Run a distortion scaling benchmark.")
    ben.add_argument("--family", required=True, choices=sorted(bench.METHODS), help="Instance family.")
    ben.add_argument("--method", required=True, help="Embedding method.")
    ben.add_argument("--n", type=int, nargs="+", required=True, help="Sizes to run.")
    ben.add_argument("--trials", type=int, default=20, help="Trials per size.")
    ben.add_argument("--m", type=int, help="Number of FRT trees.")
    ben.add_argument("--seed", type=int, default=0, help="Random seed.")
    ben.add_argument("--jobs", type=int, default=1, help="Worker processes.")
    ben.add_argument("--samples", type=int, default=2000, help="Sampled subsets above --exact-cap.")
    ben.add_argument("--exact-cap", type=int, default=16, help="Largest n measured exactly.")
    ben.add_argument("--format", choices=["csv"], default="csv", help="Output format.")
    ben.add_argument("--out", default="-", help="Output CSV; '-' for STDOUT.")
    ben.set_defaults(func=cmd_bench)
    return parser


def cmd_gen(args):
    instance = instances.generate(args.kind, args.n, seed=args.seed, diversity=args.diversity, dim=args.dim,
                                  p=args.p, edges=args.edges, max_size=args.max_size, blocks=args.blocks)
    instance.save(args.out)
    return EXIT_OK


def cmd_check(args):
    instance = instances.Instance.load(args.instance)
    report = core.check_diversity_axioms(instance.diversity(), max_violations=args.max_violations)
    utils.write_json(report.to_json(), args.out)
    if not report.passed:
        error_logger.error("%s fails the diversity axioms (%d violations).", args.instance, report.violation_count)
        return EXIT_INVALID
    return EXIT_OK


def _metric_source(instance, method):
    if instance.metric is None:
        raise instances.InstanceError("Method '{}' needs an instance with a metric (kind '{}' has none).".format(
            method, instance.spec["kind"]))
    return instance.metric


def embed_instance(instance, method, m=None, seed=None, scales=None, samples_per_scale=None,
                   choice=embed.SET_AUGMENTED, weights="uniform-singleton"):
    """
    Dispatches an embedding method on an instance.

    Raises:
        `diversipy.instances.InstanceError`: The method does not apply to the instance's family.
    """
    if method == "coordinate":
        return embed.coordinate_embed(instance.diversity())
    if method == "frt":
        return embed.frt_embed(_metric_source(instance, method), m, seed)
    if method == "bourgain":
        metric = instance.metric if instance.metric is not None else core.induced_metric(instance.diversity())
        cfg = embed.BourgainConfig(scales=scales, samples_per_scale=samples_per_scale, seed=seed)
        return embed.bourgain_embed_metric(metric, cfg)
    if method == "tree":
        oracle = instance.diversity()
        if oracle.kind != "tree":
            raise instances.InstanceError("Method 'tree' needs a tree instance, got '{}'.".format(oracle.kind))
        return embed.tree_to_l1(oracle.tree)
    if method == "hypergraph-reduce-then-frt":
        oracle = instance.diversity()
        if oracle.kind != "hypergraph":
            raise instances.InstanceError("Method '{}' needs a hypergraph instance, got '{}'.".format(
                method, oracle.kind))
        return embed.hypergraph_frt_embed(oracle.hypergraph, m, seed)
    if method == "scheme":
        oracle = instance.diversity()
        if weights == "bourgain":
            cfg = embed.BourgainConfig(scales=scales, samples_per_scale=samples_per_scale, seed=seed)
            scheme = embed.bourgain_scheme_weights(oracle.n, cfg)
        else:
            scheme = embed.uniform_singleton_weights(oracle.n, choice)
        emb = embed.scheme_embed(oracle, scheme)
        return core.PointEmbedding(emb.coords, method="scheme", seed=seed,
                                   params={"choice": scheme.choice, "weights": weights})
    raise instances.InstanceError("Unknown embedding method '{}'.".format(method))


def cmd_embed(args):
    instance = instances.Instance.load(args.instance)
    emb = embed_instance(instance, args.method, m=args.m, seed=args.seed, scales=args.scales,
                         samples_per_scale=args.samples_per_scale, choice=args.choice, weights=args.weights)
    utils.write_json(emb.to_json(), args.out)
    return EXIT_OK


def cmd_distortion(args):
    instance = instances.Instance.load(args.instance)
    emb = core.PointEmbedding.from_json(utils.read_json(args.embedding))
    oracle = instance.diversity(args.against)
    if args.samples is not None:
        report = distortion.sampled_distortion(oracle, emb, args.samples, args.seed)
    else:
        report = distortion.exact_distortion(oracle, emb)
    payload = report.to_json()
    payload["against"] = oracle.kind
    if args.format == "json":
        utils.write_json(payload, args.out)
        return EXIT_OK
    if args.out == "-":
        _write_report_csv(payload, sys.stdout)
    else:
        with open(args.out, "w", newline="") as fout:
            _write_report_csv(payload, fout)
    return EXIT_OK


def _write_report_csv(payload, fh):
    writer = csv.DictWriter(fh, fieldnames=DISTORTION_COLUMNS, extrasaction="ignore")
    writer.writeheader()
    writer.writerow(payload)


def cmd_bench(args):
    plan = bench.BenchPlan(family=args.family, method=args.method, ns=tuple(args.n), trials=args.trials, m=args.m,
                           seed=args.seed, out=args.out, jobs=args.jobs, samples=args.samples,
                           exact_cap=args.exact_cap)
    bench.run_bench(plan)
    return EXIT_OK


def main(argv=None):
    parser = get_parser()
    args = parser.parse_args(argv)
    setup_logging()
    try:
        return args.func(args)
    except core.CapExceededError as e:
        error_logger.error("Size cap exceeded: %s", e)
        return EXIT_CAP
    except (OSError, json.JSONDecodeError) as e:
        error_logger.error("I/O error: %s", e)
        return EXIT_IO
    except (core.DiversityError, KeyError, ValueError) as e:
        error_logger.error("%s: %s", e.__class__.__name__, e)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
