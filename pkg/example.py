from fractions import Fraction
import logging
import numpy as np
from indirectlearner import (ProductDistribution, ProductInverter,
                             QueryOracle, builtin_function, learn_over_mu)
from indirectlearner.learners import BruteForceLearner
from indirectlearner.reduction import composed_error
from indirectlearner.distributions import exact_output_distribution

logging.basicConfig()
logging.getLogger().setLevel(logging.DEBUG)

target = builtin_function("and", 2)
distribution = ProductDistribution.parse("3/4, 3/4")
sampler = distribution.sampler()
inverter = ProductInverter(distribution, Fraction(1, 256))

hypothesis = learn_over_mu(QueryOracle.from_map(target, name="and"), sampler,
                           inverter, BruteForceLearner(), Fraction(1, 8),
                           Fraction(1, 8), np.random.default_rng(1))
print("queries: {}".format(hypothesis.queries))

mu = exact_output_distribution(sampler)
print("error over mu: {}".format(composed_error(hypothesis, target, mu)))

rng = np.random.default_rng(2)
for x in ("00", "01", "10", "11"):
    print("{}: {}".format(x, hypothesis.evaluate_random(x, rng)))
