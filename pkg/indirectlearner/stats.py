from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Callable, Mapping, Optional, Set, Union
import logging
import math
import numpy as np
from .exceptions import ConfigurationError
from .bitcore import BitString, BooleanMap
from .distributions import ExactDistribution, Sampler
from .utils import format_rational, substream


logger = logging.getLogger(__name__)

DEFAULT_CONFIDENCE = 0.05


class DistanceReport:
    """
    A statistical distance, either exact or estimated from samples with a
    confidence radius.
    """

    def __init__(self, distance: Union[Fraction, float], exact: bool = True,
                 samples: Optional[int] = None, radius: float = 0.0,
                 confidence: Optional[float] = None):
        if exact and radius:
            raise ValueError("exact reports have no confidence radius")
        if not 0 <= distance <= 1:
            raise ValueError("distance {} outside [0, 1]".format(distance))
        self.distance = distance
        self.exact = exact
        self.samples = samples
        self.radius = radius
        self.confidence = confidence

    def within(self, bound: Union[Fraction, float]) -> bool:
        """
        Whether the distance is consistent with being at most bound.
        """
        if self.exact:
            return self.distance <= bound
        return float(self.distance) - self.radius <= float(bound)

    def asdict(self) -> dict:
        if self.exact:
            return {"exact": True,
                    "distance": format_rational(self.distance),
                    "value": float(self.distance)}
        return {"exact": False, "value": round(float(self.distance), 12),
                "samples": self.samples, "radius": round(self.radius, 12),
                "confidence": self.confidence}

    def __str__(self):
        if self.exact:
            return format_rational(self.distance)
        return "{:.6f} +/- {:.6f}".format(self.distance, self.radius)


def statistical_distance(d0: ExactDistribution,
                         d1: ExactDistribution) -> Fraction:
    """
    max over events T of |D0(T) - D1(T)|, computed as half the L1 distance.
    """
    support = set(x for x, _ in d0.items()) | set(x for x, _ in d1.items())
    total = sum((abs(d0.probability(x) - d1.probability(x))
                 for x in support), Fraction(0))
    return total / 2


def maximizing_event(d0: ExactDistribution,
                     d1: ExactDistribution) -> Set[BitString]:
    """
    The event {x : D0(x) > D1(x)}, on which the distance is attained.
    """
    return {x for x, mass in d0.items() if mass > d1.probability(x)}


def event_gap(d0: ExactDistribution, d1: ExactDistribution,
              event: Set[BitString]) -> Fraction:
    return sum((d0.probability(x) - d1.probability(x) for x in event),
               Fraction(0))


def _bit(value) -> int:
    if isinstance(value, BitString):
        if len(value) != 1:
            raise ValueError("expected a single bit, got {}".format(value))
        return value.value
    return int(value)


def error_rate(h: Callable[[BitString], int], f: BooleanMap,
               d: ExactDistribution) -> Fraction:
    """
    Exact disagreement mass Pr_{x ~ D}[h(x) != f(x)].

    Raises:
        ConfigurationError - h, f and D do not share one arity.
    """
    arity = getattr(h, "arity", f.arity)
    if arity != f.arity:
        raise ConfigurationError("hypothesis arity {} differs from target "
                                 "arity {}".format(arity, f.arity))
    error = Fraction(0)
    for x, mass in d.items():
        if len(x) != f.arity:
            raise ConfigurationError("distribution over {}-bit strings for a "
                                     "target of arity {}"
                                     .format(len(x), f.arity))
        if _bit(h(x)) != f.evaluate_int(x.value):
            error += mass
    return error


def dkw_radius(samples: int, outcomes: int,
               confidence: float = DEFAULT_CONFIDENCE) -> float:
    """
    Radius r with Pr[TV(empirical, true) > r] <= confidence for a histogram
    over at most `outcomes` values: a Hoeffding/DKW bound made uniform over
    all 2^outcomes events.
    """
    if samples < 1:
        raise ValueError("at least one sample is needed")
    outcomes = max(outcomes, 1)
    return math.sqrt((outcomes * math.log(2) + math.log(2 / confidence))
                     / (2 * samples))


def empirical_tv(counts0: Mapping, counts1: Mapping) -> float:
    total0 = sum(counts0.values())
    total1 = sum(counts1.values())
    keys = set(counts0) | set(counts1)
    return sum(abs(counts0.get(x, 0) / total0 - counts1.get(x, 0) / total1)
               for x in keys) / 2


def _draw_counts(sampler: Sampler, trials: int,
                 rng: np.random.Generator) -> Counter:
    counts = Counter()
    for _ in range(trials):
        counts[sampler.draw(rng)] += 1
    return counts


def empirical_distance(sampler0: Sampler, sampler1: Sampler, trials: int,
                       coins: np.random.Generator,
                       confidence: float = DEFAULT_CONFIDENCE,
                       support_size: Optional[int] = None) -> DistanceReport:
    """
    Plug-in estimate of the distance between two samplers' outputs.

    Parameters:
        sampler0, sampler1: Sampler - The samplers to compare.
        trials: int - Samples drawn from each sampler.
        coins: np.random.Generator - Source of the samplers' coins.
        support_size: int - Number of outputs either sampler can produce,
                            2^output_length when omitted.

    Returns:
        DistanceReport - Half the L1 distance of the two histograms, with a
                         radius valid with probability 1 - confidence.
    """
    if trials < 1:
        raise ValueError("at least one trial is needed")
    counts0 = _draw_counts(sampler0, trials, coins)
    counts1 = _draw_counts(sampler1, trials, coins)
    estimate = empirical_tv(counts0, counts1)
    observed = len(set(counts0) | set(counts1))
    if support_size is None:
        support_size = 1 << max(sampler0.output_length,
                                sampler1.output_length)
    # the union bound runs over every possible outcome, seen or not
    outcomes = max(support_size, observed)
    # each histogram may be off by the radius, with half the confidence each
    radius = 2 * dkw_radius(trials, outcomes, confidence / 2)
    logger.debug("Empirical distance {:.6f} over {} trials ({} of {} "
                 "outcomes seen)".format(estimate, trials, observed, outcomes))
    return DistanceReport(min(estimate, 1.0), exact=False, samples=trials,
                          radius=radius, confidence=confidence)


def conditional_inversion_distance(f: BooleanMap,
                                   image_mass: Mapping[BitString, Fraction],
                                   observed: Mapping[BitString, Counter],
                                   confidence: float = DEFAULT_CONFIDENCE
                                   ) -> DistanceReport:
    """
    Distance between I(y) o y and x o f(x), estimated from observed
    inverter outputs per image y and compared against the exact uniform
    distribution on f^-1(y). FAIL is counted under the None key.

    Parameters:
        f: BooleanMap - The inverted function.
        image_mass: Mapping - Exact probability of each image y.
        observed: Mapping - For each y, a Counter of inverter outputs.
    """
    estimate = 0.0
    radius = 0.0
    samples = 0
    for y, mass in image_mass.items():
        counts = observed.get(y)
        if not counts:
            # an unobserved image contributes at most its own mass
            estimate += float(mass)
            continue
        total = sum(counts.values())
        samples += total
        candidates = f.preimage_ints(y.value)
        uniform = 1 / len(candidates)
        reference = {BitString(u, f.arity): uniform for u in candidates}
        gap = sum(abs(counts.get(x, 0) / total - reference.get(x, 0.0))
                  for x in set(counts) | set(reference)) / 2
        estimate += float(mass) * gap
        radius += float(mass) * dkw_radius(total, len(reference) + 1,
                                           confidence)
    return DistanceReport(min(estimate, 1.0), exact=False, samples=samples,
                          radius=radius, confidence=confidence)


def run_trials(trial: Callable[[np.random.Generator], object], trials: int,
               seed: int, name: str, workers: int = 1,
               chunk_size: int = 1000) -> list:
    """
    Run trial(rng) `trials` times, in chunks with their own substreams.

    Chunks fan out over a thread pool and are merged in chunk order, so the
    results only depend on the seed, never on the worker count.
    """
    starts = list(range(0, trials, chunk_size))

    def task(index):
        rng = substream(seed, name, index)
        count = min(chunk_size, trials - starts[index])
        return [trial(rng) for _ in range(count)]

    results = []
    with ThreadPoolExecutor(max_workers=max(workers, 1)) as executor:
        for chunk in executor.map(task, range(len(starts))):
            results.extend(chunk)
    return results
