from fractions import Fraction
from itertools import combinations
from typing import Dict, Union
import logging
import math
import re
import numpy as np
from .exceptions import SizeError, ValidationError
from .utils import parity, parity_array
from .bitcore import (DEFAULT_MAX_ARITY, BitString, QueryOracle, TruthTable,
                      bitstring, tt_from_oracle)


logger = logging.getLogger(__name__)


class Hypothesis:
    """
    A deterministic Boolean map on `arity` bits.
    """

    arity = 0

    def evaluate_int(self, u: int) -> int:
        raise NotImplementedError

    def __call__(self, w: BitString) -> int:
        w = bitstring(w)
        if len(w) != self.arity:
            raise ValueError("{}-bit input given to a hypothesis of arity {}"
                             .format(len(w), self.arity))
        return self.evaluate_int(w.value)

    def to_truth_table(self) -> TruthTable:
        return TruthTable.from_function(self.arity, 1, self.evaluate_int)


class TableHypothesis(Hypothesis):

    def __init__(self, table: TruthTable):
        if table.out_len != 1:
            raise ValueError("a hypothesis table must have 1-bit outputs")
        self.table = table
        self.arity = table.arity

    def evaluate_int(self, u: int) -> int:
        return self.table.evaluate_int(u)

    def to_truth_table(self) -> TruthTable:
        return self.table


class PolynomialHypothesis(Hypothesis):
    """
    The sign of a truncated Fourier expansion sum_S c_S chi_S(w), with
    chi_S(w) = (-1)^(popcount(w & S)). A negative value means 1, ties
    mean 0.
    """

    def __init__(self, arity: int, coefficients: Dict[int, float]):
        self.arity = arity
        self.coefficients = dict(coefficients)

    def value(self, u: int) -> float:
        return sum(c * (-1 if parity(u & mask) else 1)
                   for mask, c in self.coefficients.items())

    def evaluate_int(self, u: int) -> int:
        return int(self.value(u) < 0)

    def to_truth_table(self) -> TruthTable:
        inputs = np.arange(1 << self.arity, dtype=np.int64)
        values = np.zeros(len(inputs))
        for mask, c in self.coefficients.items():
            values += c * (1 - 2 * parity_array(inputs & mask))
        return TruthTable(self.arity, 1, [int(v < 0) for v in values])


class UniformLearner:
    """
    A membership-query learner over the uniform distribution.

    With probability at least 1 - delta over rng, learn() returns a
    hypothesis h with Pr_w[h(w) != f(w)] <= epsilon, for targets inside
    the learner's promise.
    """

    name = "learner"

    def learn(self, oracle: QueryOracle, m: int, epsilon: Fraction,
              delta: Fraction, rng: np.random.Generator) -> Hypothesis:
        raise NotImplementedError

    def query_budget(self, m: int, epsilon: Fraction,
                     delta: Fraction) -> int:
        raise NotImplementedError

    def __str__(self):
        return self.name


class BruteForceLearner(UniformLearner):

    name = "brute_force"

    def __init__(self, cap: int = DEFAULT_MAX_ARITY):
        self.cap = cap

    def learn(self, oracle, m, epsilon=None, delta=None, rng=None):
        return brute_force_learn(oracle, m, epsilon, delta, cap=self.cap)

    def query_budget(self, m, epsilon=None, delta=None):
        return 1 << m


def brute_force_learn(oracle: QueryOracle, m: int, epsilon: Fraction = None,
                      delta: Fraction = None,
                      cap: int = DEFAULT_MAX_ARITY) -> TableHypothesis:
    """
    Copy the target exactly by querying all 2^m inputs.

    Raises:
        SizeError - m exceeds the enumeration cap.
    """
    if m > cap:
        raise SizeError("brute force learning on {} bits exceeds the "
                        "enumeration cap of {} bits".format(m, cap))
    table = tt_from_oracle(oracle, m, max_arity=cap)
    if table.out_len != 1:
        raise ValueError("the target oracle is not Boolean")
    return TableHypothesis(table)


class LowDegreeLearner(UniformLearner):
    """
    Estimates every Fourier coefficient of degree at most d from uniform
    membership queries and outputs the sign of the truncated expansion.

    With M coefficients and N shared samples, a two-sided Hoeffding bound
    and a union bound make every estimate accurate to tau = sqrt(eps/(2M))
    with probability 1 - delta when N = ceil(4M/eps * ln(2M/delta)). Then
    Pr[h != f] <= E[(F - g)^2] <= eps/2 + M tau^2 = eps for targets with
    Fourier mass at least 1 - eps/2 below degree d.
    """

    def __init__(self, degree: int):
        if degree < 0:
            raise ValueError("degree must be nonnegative")
        self.degree = degree
        self.name = "low_degree({})".format(degree)

    def masks(self, m: int) -> list:
        return [sum(1 << (m - 1 - i) for i in subset)
                for size in range(self.degree + 1)
                for subset in combinations(range(m), size)]

    def query_budget(self, m, epsilon, delta):
        count = len(self.masks(m))
        epsilon, delta = float(epsilon), float(delta)
        return math.ceil(4 * count / epsilon * math.log(2 * count / delta))

    def learn(self, oracle, m, epsilon, delta, rng):
        return low_degree_learn(oracle, m, self.degree, epsilon, delta, rng)


def low_degree_learn(oracle: QueryOracle, m: int, degree: int,
                     epsilon: Fraction, delta: Fraction,
                     coins: np.random.Generator) -> PolynomialHypothesis:
    """
    Learn the degree <= d part of the target's Fourier expansion.

    Parameters:
        oracle: QueryOracle - Membership queries to the m-bit target.
        m: int - Arity of the target.
        degree: int - Largest degree estimated, at most m.
        epsilon, delta: Fraction - Error and failure bounds.
        coins: np.random.Generator - Source of the uniform sample points.

    Returns:
        PolynomialHypothesis - Sign of the estimated expansion.
    """
    if degree > m:
        raise ValueError("degree {} exceeds the arity {}".format(degree, m))
    learner = LowDegreeLearner(degree)
    masks = learner.masks(m)
    samples = learner.query_budget(m, epsilon, delta)
    inputs = coins.integers(0, 1 << m, size=samples, dtype=np.int64)
    signs = np.array([1 - 2 * oracle.query_bit(BitString(int(u), m))
                      for u in inputs], dtype=np.float64)
    coefficients = {}
    for mask in masks:
        characters = 1 - 2 * parity_array(inputs & mask)
        coefficients[mask] = float(np.mean(signs * characters))
    logger.debug("Estimated {} coefficients from {} queries"
                 .format(len(masks), samples))
    return PolynomialHypothesis(m, coefficients)


def parse_learner(name: Union[str, UniformLearner],
                  cap: int = DEFAULT_MAX_ARITY) -> UniformLearner:
    """
    "brute_force" or "low_degree(d)".

    Raises:
        ValidationError - The name matches no known learner.
    """
    if isinstance(name, UniformLearner):
        return name
    text = name.strip().lower()
    if text == "brute_force":
        return BruteForceLearner(cap=cap)
    match = re.match(r"^low_degree\s*\(\s*(\d+)\s*\)$", text)
    if match:
        return LowDegreeLearner(int(match.group(1)))
    raise ValidationError("unknown learner '{}' (expected brute_force or "
                          "low_degree(d))".format(name))
