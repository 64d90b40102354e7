# -*- coding: utf-8 -*-

"""
Finite diversities, their l1 embeddings, and exact distortion measurement at desk scale.

Optional Environment Variables:
    1) DIVERSIPY_LOG_DIR
    2) DIVERSIPY_LOG_LEVEL
    3) DIVERSIPY_AXIOM_RTOL
    4) DIVERSIPY_TABLE_CAP, DIVERSIPY_AXIOM_CAP, DIVERSIPY_STEINER_CAP, DIVERSIPY_TSP_CAP,
       DIVERSIPY_HYPEREDGE_CAP
    5) DIVERSIPY_ENSEMBLE_SIZE
"""

import logging
import os
import sys

#: The directory that contains the log files created by the command-line program.
LOG_DIR = os.environ.get("DIVERSIPY_LOG_DIR", "Diversipy_Logs")
LOG_LEVEL = os.environ.get("DIVERSIPY_LOG_LEVEL", "INFO").upper()

#: Relative tolerance used when comparing the two sides of an axiom or sandwich inequality.
#: The effective slack is ``AXIOM_RTOL * max(1, |lhs|, |rhs|)``.
AXIOM_RTOL = float(os.environ.get("DIVERSIPY_AXIOM_RTOL", "1e-9"))

##################
### SCALE CAPS ###
##################
#: Largest ground set for which full subset tables and exact distortion are computed (2^24 masks).
TABLE_CAP = int(os.environ.get("DIVERSIPY_TABLE_CAP", "24"))
#: Largest ground set for the exhaustive axiom scan and sandwich checks.
AXIOM_CAP = int(os.environ.get("DIVERSIPY_AXIOM_CAP", "12"))
#: Largest terminal set handed to Dreyfus-Wagner.
STEINER_CAP = int(os.environ.get("DIVERSIPY_STEINER_CAP", "12"))
#: Largest tour handed to Held-Karp.
TSP_CAP = int(os.environ.get("DIVERSIPY_TSP_CAP", "14"))
#: Largest hyperedge count for the exact hypergraph Steiner search.
HYPEREDGE_CAP = int(os.environ.get("DIVERSIPY_HYPEREDGE_CAP", "20"))

#: Default number of FRT trees averaged by ``embed.frt_embed``.
DEFAULT_ENSEMBLE_SIZE = int(os.environ.get("DIVERSIPY_ENSEMBLE_SIZE", "64"))

#: The name of the debug ``logging`` instance.
DEBUG_LOGGER_NAME = "dvp_debug"
#: The name of the error ``logging`` instance; the command-line program logs every failure here.
ERROR_LOGGER_NAME = "dvp_error"
#: The name of the ``logging`` instance that records one line per finished benchmark row.
BENCH_LOGGER_NAME = "dvp_bench"

#: A ``logging`` instance that logs messages sent to it to STDERR (STDOUT carries JSON/CSV output).
debug_logger = logging.getLogger(DEBUG_LOGGER_NAME)
debug_logger.setLevel(logging.DEBUG)
f_formatter = logging.Formatter('%(asctime)s:%(name)s:\t%(message)s')
ch = logging.StreamHandler(stream=sys.stderr)
ch.setLevel(getattr(logging, LOG_LEVEL, logging.INFO))
ch.setFormatter(f_formatter)
debug_logger.addHandler(ch)
