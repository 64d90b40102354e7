# -*- coding: utf-8 -*-

"""
Shared helpers: integer bit-set subsets, vectorised tables over all subsets, log files, JSON and
seed derivation.
"""

import json
import logging
import os
import socket
import sys
from collections.abc import Iterable

import numpy as np

import diversipy


#######################
### BIT-SET SUBSETS ###
#######################

def make_mask(indexes):
    """
    Packs point indices into an integer bit-set (bit i set means point i is a member).

    Args:
        indexes: iterable of `int`.

    Returns:
        `int`.
    """
    value = 0
    for idx in indexes:
        value |= 1 << int(idx)
    return value


def popcount(mask):
    return int(mask).bit_count()


def iter_members(mask):
    """Yields the member indices of a bit-set in increasing order."""
    mask = int(mask)
    index = 0
    while mask:
        if mask & 1:
            yield index
        mask >>= 1
        index += 1


def members(mask):
    return list(iter_members(mask))


def full_mask(n):
    return (1 << n) - 1


def as_mask(subset, n=None):
    """
    Normalises a subset given as an `int` bit-set or as an iterable of indices.

    Args:
        subset: `int` or iterable of `int`.
        n: `int`. When given, every member must be smaller than n.

    Returns:
        `int`.

    Raises:
        `IndexError`: A member lies outside [0, n).
    """
    if isinstance(subset, (int, np.integer)):
        mask = int(subset)
        if mask < 0:
            raise IndexError("Subset masks are nonnegative, got {}.".format(mask))
    elif isinstance(subset, Iterable):
        subset = list(subset)
        if any(int(i) < 0 for i in subset):
            raise IndexError("Negative point index in {}.".format(subset))
        mask = make_mask(subset)
    else:
        raise TypeError("Cannot interpret {!r} as a subset.".format(subset))
    if n is not None and mask >> n:
        raise IndexError("Subset {} has members outside [0, {}).".format(members(mask), n))
    return mask


def mask_key(mask):
    """The diversity-table JSON key of a subset: comma-separated sorted indices."""
    return ",".join(str(i) for i in iter_members(mask))


def key_mask(key):
    key = key.strip()
    if not key:
        return 0
    return make_mask(int(x) for x in key.split(","))


#####################################
### VECTORISED TABLES OVER SUBSETS ###
#####################################

def popcount_table(n):
    """`numpy.ndarray` of length 2^n holding the cardinality of every mask."""
    table = np.zeros(1 << n, dtype=np.int64)
    for b in range(n):
        lo = 1 << b
        table[lo:2 * lo] = table[:lo] + 1
    return table


def subset_max_table(values):
    """
    Computes max over members for every subset of the rows of ``values``.

    Row j of ``values`` belongs to point j. The entry for mask m is the elementwise maximum of
    the rows in m; the empty mask gets ``-inf``. Built by the highest-bit recurrence
    ``table[m | 1<<b] = max(table[m], values[b])`` for ``m < 2^b``.

    Args:
        values: `numpy.ndarray` of shape (t,) or (t, k).

    Returns:
        `numpy.ndarray` of shape (2^t,) or (2^t, k).
    """
    values = np.asarray(values, dtype=float)
    t = values.shape[0]
    table = np.full((1 << t,) + values.shape[1:], -np.inf)
    for b in range(t):
        lo = 1 << b
        table[lo:2 * lo] = np.maximum(table[:lo], values[b])
    return table


def subset_min_table(values):
    return -subset_max_table(-np.asarray(values, dtype=float))


def masks_with_bit(n, bit):
    """All masks over n points that contain ``bit``, in increasing order."""
    masks = np.arange(1 << n, dtype=np.int64)
    return masks[(masks >> bit) & 1 == 1]


###############
### LOGGING ###
###############

def get_logfile_name(tag):
    """
    Creates a name for a log file that is meant to be used in a call to
    ``logging.FileHandler``. The format of the file name is 'log_$HOST_$TAG.txt', where $HOST is
    the name of the machine running the program and $TAG is the value of the 'tag' argument. The
    file lives in the directory given by `diversipy.LOG_DIR`, which is created if need be.

    Args:
        tag: `str`. A tag name to add to the end of the log file name for clarity on the
            log file's purpose.
    """
    if not os.path.exists(diversipy.LOG_DIR):
        os.makedirs(diversipy.LOG_DIR)
    filename = "log_" + socket.gethostname() + "_" + tag + ".txt"
    return os.path.join(diversipy.LOG_DIR, filename)


def add_file_handler(logger, level, tag):
    """
    Adds a ``logging.FileHandler`` handler to the specified ``logging`` instance that will log
    the messages it receives at the specified level or greater.

    Args:
        logger: The `logging.Logger` instance to add the `logging.FileHandler` to.
        level:  `int`. A logging level (i.e. ``logging.DEBUG``, ``logging.ERROR``).
        tag: `str`. Passed on to `get_logfile_name`.
    """
    f_formatter = logging.Formatter('%(asctime)s:%(name)s:\t%(message)s')
    handler = logging.FileHandler(filename=get_logfile_name(tag), mode="a")
    handler.setLevel(level)
    handler.setFormatter(f_formatter)
    logger.addHandler(handler)


############
### JSON ###
############

def read_json(path):
    with open(path, "r") as fh:
        return json.load(fh)


def write_json(payload, path=None):
    """
    Writes a JSON document to ``path``, or to STDOUT when ``path`` is None or "-".
    """
    text = json.dumps(payload, indent=2, sort_keys=False)
    if path is None or path == "-":
        sys.stdout.write(text + "\n")
        return
    with open(path, "w") as fout:
        fout.write(text + "\n")


#############
### SEEDS ###
#############

def derive_rng(seed, *keys):
    """
    A `numpy.random.Generator` seeded from ``(seed, *keys)``. Child streams derived from the same
    seed with different keys are independent, so parallel work can be scheduled in any order.
    A None seed gives fresh OS entropy.
    """
    if seed is None:
        return np.random.default_rng()
    if isinstance(seed, np.random.Generator):
        if not keys:
            return seed
        seed = int(seed.integers(0, 2 ** 63))
    return np.random.default_rng([int(seed)] + [int(k) for k in keys])
