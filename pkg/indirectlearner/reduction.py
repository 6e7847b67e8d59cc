from fractions import Fraction
from typing import Optional
import logging
import math
import numpy as np
from .exceptions import CoinLengthError, ConfigurationError
from .bitcore import BitString, BooleanMap, QueryOracle, TruthTable, bitstring
from .distributions import (DEFAULT_ENUMERATION_CAP, ExactDistribution,
                            Sampler, exact_output_distribution)
from .inverters import (DistributionalInverter, joint_preimage_distribution,
                        reference_joint_distribution)
from .learners import Hypothesis, UniformLearner
from .stats import DEFAULT_CONFIDENCE, error_rate, statistical_distance


logger = logging.getLogger(__name__)


class ComposedTarget:
    """
    The target composed with a sampler: f_mu(w) = f(S(w)). Every query to
    f_mu issues exactly one query to f.
    """

    def __init__(self, f: QueryOracle, sampler: Sampler):
        if sampler.output_length != f.arity:
            raise ConfigurationError("sampler outputs {} bits but the target "
                                     "has arity {}"
                                     .format(sampler.output_length, f.arity))
        self.f = f
        self.sampler = sampler
        self.oracle = QueryOracle(self._evaluate, sampler.coin_length,
                                  name="{}_mu".format(f.name))

    def _evaluate(self, w: BitString) -> BitString:
        return self.f.query(self.sampler.sample(w))

    def __call__(self, w: BitString) -> BitString:
        return self.oracle.query(w)


def compose_target(f: QueryOracle, sampler: Sampler) -> ComposedTarget:
    return ComposedTarget(f, sampler)


class ComposedHypothesis:
    """
    C'(x; z) = C(I(x; z)), or the default label when the inverter fails.
    """

    def __init__(self, hypothesis: Hypothesis,
                 inverter: DistributionalInverter, default_label: int = 0):
        if hypothesis.arity != inverter.output_length:
            raise ConfigurationError("hypothesis arity {} differs from the "
                                     "inverter's preimage length {}"
                                     .format(hypothesis.arity,
                                             inverter.output_length))
        self.hypothesis = hypothesis
        self.inverter = inverter
        self.default_label = default_label
        self.arity = inverter.input_length
        self.queries = 0

    @property
    def coin_length(self) -> Optional[int]:
        return self.inverter.coin_length

    def _label(self, outcome) -> int:
        if outcome.failed:
            return self.default_label
        return self.hypothesis(outcome.preimage)

    def evaluate(self, x: BitString, z) -> int:
        """
        Raises:
            CoinLengthError - z is not a coin string of coin_length bits.
        """
        if self.coin_length is not None:
            z = bitstring(z)
            if len(z) != self.coin_length:
                raise CoinLengthError("evaluation needs {} coins, got {}"
                                      .format(self.coin_length, len(z)))
        return self._label(self.inverter.invert(bitstring(x), z))

    def evaluate_random(self, x: BitString, rng: np.random.Generator) -> int:
        return self._label(self.inverter.sample(bitstring(x), rng))

    def evaluate_majority(self, x: BitString, rng: np.random.Generator,
                          votes: int = 5) -> int:
        """
        Derandomized evaluation: the majority label over an odd number of
        independent coin draws.
        """
        if votes < 1 or votes % 2 == 0:
            raise ValueError("votes must be a positive odd number")
        ones = sum(self.evaluate_random(x, rng) for _ in range(votes))
        return int(2 * ones > votes)

    def probability_of_one(self, x: BitString,
                           cap: int = DEFAULT_ENUMERATION_CAP) -> Fraction:
        result = Fraction(0)
        for preimage, mass in self.inverter.outcome_distribution(
                bitstring(x), cap).items():
            label = self.default_label if preimage is None \
                else self.hypothesis(preimage)
            if label:
                result += mass
        return result

    def __call__(self, x: BitString, z) -> int:
        return self.evaluate(x, z)


def evaluate(h: ComposedHypothesis, x: BitString, z) -> int:
    return h.evaluate(x, z)


def check_budget(inverter: DistributionalInverter, alpha: Fraction,
                 split: Fraction = Fraction(1, 2), enforce: bool = True):
    """
    The inverter's FAIL mass and declared distance must each fit in half of
    the inverter's share alpha * (1 - split) of the error budget.

    Raises:
        ConfigurationError - A bound is violated and enforce is set.
    """
    share = alpha * (1 - split) / 2
    problems = []
    if inverter.failure_bound > share:
        problems.append("FAIL bound {} exceeds {}"
                        .format(inverter.failure_bound, share))
    if inverter.distance_bound > share:
        problems.append("distance bound {} exceeds {}"
                        .format(inverter.distance_bound, share))
    if not problems:
        return True
    message = "inverter {} breaks the error budget for alpha = {}: {}" \
        .format(inverter, alpha, "; ".join(problems))
    if enforce:
        raise ConfigurationError(message)
    logger.warning(message)
    return False


def learn_over_mu(f: QueryOracle, sampler: Sampler,
                  inverter: DistributionalInverter, learner: UniformLearner,
                  alpha: Fraction, beta: Fraction,
                  coins: np.random.Generator,
                  split: Fraction = Fraction(1, 2), default_label: int = 0,
                  enforce_budget: bool = True) -> ComposedHypothesis:
    """
    Learn f over the sampler's distribution by learning f o S over the
    uniform distribution and composing the result with an inverter for S.

    Parameters:
        f: QueryOracle - Membership queries to the target.
        sampler: Sampler - Sampler for the distribution mu.
        inverter: DistributionalInverter - Inverter for the sampler.
        learner: UniformLearner - Learner over the uniform distribution.
        alpha: Fraction - Error bound over mu.
        beta: Fraction - Failure bound of the learner.
        coins: np.random.Generator - The learner's coins.
        split: Fraction - Share of alpha given to the learner.

    Returns:
        ComposedHypothesis - With probability 1 - beta, its error over mu is
                             at most alpha.

    Raises:
        ConfigurationError - Lengths do not line up, or the inverter breaks
                             the error budget while enforce_budget is set.
    """
    alpha, beta, split = Fraction(alpha), Fraction(beta), Fraction(split)
    if not 0 < split < 1:
        raise ConfigurationError("budget split must lie in (0, 1)")
    if inverter.input_length != sampler.output_length or \
            inverter.output_length != sampler.coin_length:
        raise ConfigurationError("inverter {} does not match sampler {}"
                                 .format(inverter, sampler))
    check_budget(inverter, alpha, split, enforce=enforce_budget)
    target = compose_target(f, sampler)
    logger.debug("Learning {} over {} coins with error {}"
                 .format(target.oracle, sampler.coin_length, alpha * split))
    hypothesis = learner.learn(target.oracle, sampler.coin_length,
                               alpha * split, beta, coins)
    composed = ComposedHypothesis(hypothesis, inverter, default_label)
    composed.queries = target.oracle.queries
    return composed


def composed_error(h: ComposedHypothesis, f: BooleanMap,
                   d: ExactDistribution,
                   cap: int = DEFAULT_ENUMERATION_CAP) -> Fraction:
    """
    Exact Pr_{x ~ D, z}[C'(x; z) != f(x)].
    """
    error = Fraction(0)
    for x, mass in d.items():
        one = h.probability_of_one(x, cap)
        error += mass * (1 - one if f.evaluate_int(x.value) else one)
    return error


def empirical_composed_error(h: ComposedHypothesis, f: BooleanMap,
                             sampler: Sampler, trials: int,
                             rng: np.random.Generator,
                             confidence: float = DEFAULT_CONFIDENCE,
                             votes: int = 1):
    """
    Monte-Carlo error of C' over the sampler's distribution. With votes
    above one every label is a majority over fresh inverter coins.

    Returns:
        (float, float) - The estimate and its Hoeffding radius.
    """
    wrong = 0
    for _ in range(trials):
        x = sampler.draw(rng)
        label = h.evaluate_random(x, rng) if votes == 1 \
            else h.evaluate_majority(x, rng, votes)
        wrong += label != f.evaluate_int(x.value)
    radius = math.sqrt(math.log(2 / confidence) / (2 * trials))
    return wrong / trials, radius


def composed_target_table(f: BooleanMap, sampler: Sampler) -> TruthTable:
    return TruthTable.from_function(
        sampler.coin_length, 1,
        lambda w: f.evaluate_int(sampler.sample_int(w)))


class ErrorDecomposition:
    """
    The three sides of |err_mu(C') - err_U(C)| <= SD(w o S(w), I(S(w)) o S(w)).
    """

    def __init__(self, mu_error: Fraction, uniform_error: Fraction,
                 distance: Fraction):
        self.mu_error = mu_error
        self.uniform_error = uniform_error
        self.distance = distance

    @property
    def gap(self) -> Fraction:
        return abs(self.mu_error - self.uniform_error)

    def holds(self) -> bool:
        return self.gap <= self.distance

    def __str__(self):
        return "|{} - {}| <= {}".format(self.mu_error, self.uniform_error,
                                        self.distance)


def error_decomposition(f: BooleanMap, sampler: Sampler,
                        inverter: DistributionalInverter,
                        hypothesis: Hypothesis, default_label: int = 0,
                        cap: int = DEFAULT_ENUMERATION_CAP
                        ) -> ErrorDecomposition:
    """
    Compute, with exact rationals, the error of C' over mu, the error of C
    over the uniform coins against f o S, and the distance between the true
    and inverted joint distributions.
    """
    mu = exact_output_distribution(sampler, cap)
    composed = ComposedHypothesis(hypothesis, inverter, default_label)
    mu_error = composed_error(composed, f, mu, cap)
    uniform_error = error_rate(hypothesis, composed_target_table(f, sampler),
                               ExactDistribution.uniform(sampler.coin_length))
    distance = statistical_distance(
        reference_joint_distribution(sampler, cap),
        joint_preimage_distribution(sampler, inverter, cap))
    return ErrorDecomposition(mu_error, uniform_error, distance)
