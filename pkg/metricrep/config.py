import os
from fractions import Fraction

FORMAT_VERSION = 1  # instance/committee/coverage text formats
ENUMERATION_CAP = 20  # max voters for exact coalition enumeration
DECIMAL_PLACES = 6  # human rendering of exact values
DEFAULT_CLUSTER_DISTANCE = 1000  # "large" L for the two-cluster family
SEPARATION_CLUSTER_DISTANCE = 100
GOLDEN_TOLERANCE = Fraction(1, 10**9)  # rational surrogate for (sqrt5 - 1) / 2
OPERATION_FACTOR = 4  # neighborhood operations <= OPERATION_FACTOR * n * m
DEFAULT_SAMPLES = 20000  # coalitions drawn in sampling mode
DEFAULT_GRID = 10  # lattice side for random instances

ENUMERATION_CAP_ENV = "METRICREP_ENUMERATION_CAP"
WORKERS_ENV = "METRICREP_WORKERS"


def enumeration_cap() -> int:
    return int(os.environ.get(ENUMERATION_CAP_ENV, ENUMERATION_CAP))


def default_workers() -> int:
    return max(1, int(os.environ.get(WORKERS_ENV, 1)))
