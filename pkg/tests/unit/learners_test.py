from fractions import Fraction
import math
import pytest
import numpy as np
from indirectlearner.bitcore import (BitString, QueryOracle,
                                     builtin_function)
from indirectlearner.distributions import ExactDistribution
from indirectlearner.exceptions import SizeError, ValidationError
from indirectlearner.learners import (BruteForceLearner, LowDegreeLearner,
                                      PolynomialHypothesis, brute_force_learn,
                                      low_degree_learn, parse_learner)
from indirectlearner.stats import error_rate


def uniform_error(hypothesis, target):
    return error_rate(hypothesis, target,
                      ExactDistribution.uniform(target.arity))


def test_brute_force_learn_copies_majority_on_all_points():
    majority = builtin_function("majority", 3)
    hypothesis = brute_force_learn(QueryOracle.from_map(majority), 3)
    assert hypothesis.to_truth_table() == majority


def test_brute_force_learn_copies_a_constant():
    constant = builtin_function("constant1", 2)
    hypothesis = brute_force_learn(QueryOracle.from_map(constant), 2)
    assert all(hypothesis(BitString(u, 2)) == 1 for u in range(4))


def test_brute_force_learn_of_parity4_makes_no_mistakes():
    parity = builtin_function("parity", 4)
    oracle = QueryOracle.from_map(parity)
    hypothesis = brute_force_learn(oracle, 4)
    assert uniform_error(hypothesis, parity) == 0
    assert oracle.queries == 16


def test_brute_force_learn_raises_SizeError_above_the_cap():
    oracle = QueryOracle.from_map(builtin_function("and", 5))
    with pytest.raises(SizeError):
        brute_force_learn(oracle, 5, cap=4)


def test_low_degree_learn_recovers_a_single_variable_exactly():
    dictator = builtin_function("dictator", 3)
    hypothesis = low_degree_learn(QueryOracle.from_map(dictator), 3, 1,
                                  Fraction(1, 10), Fraction(1, 10),
                                  np.random.default_rng(0))
    assert uniform_error(hypothesis, dictator) == 0
    assert hypothesis.to_truth_table() == dictator


def test_low_degree_learn_captures_the_full_expansion_of_and2():
    and2 = builtin_function("and", 2)
    hypothesis = low_degree_learn(QueryOracle.from_map(and2), 2, 2,
                                  Fraction(1, 10), Fraction(1, 10),
                                  np.random.default_rng(1))
    assert uniform_error(hypothesis, and2) == 0


def test_low_degree_learn_cannot_fit_parity5_with_degree_1():
    parity = builtin_function("parity", 5)
    hypothesis = low_degree_learn(QueryOracle.from_map(parity), 5, 1,
                                  Fraction(1, 10), Fraction(1, 10),
                                  np.random.default_rng(2))
    assert uniform_error(hypothesis, parity) >= Fraction(1, 4)


def test_low_degree_learn_issues_exactly_the_query_budget():
    oracle = QueryOracle.from_map(builtin_function("or", 3))
    learner = LowDegreeLearner(2)
    learner.learn(oracle, 3, Fraction(1, 5), Fraction(1, 5),
                  np.random.default_rng(3))
    assert oracle.queries == learner.query_budget(3, Fraction(1, 5),
                                                  Fraction(1, 5))


def test_query_budget_follows_the_hoeffding_union_bound():
    learner = LowDegreeLearner(1)
    count = 4
    expected = math.ceil(4 * count / 0.1 * math.log(2 * count / 0.05))
    assert learner.query_budget(3, 0.1, 0.05) == expected


def test_masks_of_degree_1_mark_the_leftmost_variable_with_the_top_bit():
    assert LowDegreeLearner(1).masks(3) == [0, 4, 2, 1]


def test_low_degree_learn_raises_ValueError_if_the_degree_exceeds_m():
    with pytest.raises(ValueError):
        low_degree_learn(QueryOracle.from_map(builtin_function("and", 2)), 2,
                         3, 0.1, 0.1, np.random.default_rng(0))


def test_polynomial_hypothesis_breaks_ties_towards_0():
    hypothesis = PolynomialHypothesis(2, {0: 0.0})
    assert hypothesis(BitString(3, 2)) == 0


def test_polynomial_hypothesis_table_agrees_with_pointwise_evaluation():
    hypothesis = PolynomialHypothesis(3, {0: 0.25, 4: -0.5, 3: 0.75})
    table = hypothesis.to_truth_table()
    assert all(table.evaluate_int(u) == hypothesis.evaluate_int(u)
               for u in range(8))


def test_parse_learner_reads_the_two_learner_names():
    assert isinstance(parse_learner("brute_force"), BruteForceLearner)
    learner = parse_learner("low_degree( 2 )")
    assert isinstance(learner, LowDegreeLearner)
    assert learner.degree == 2


def test_parse_learner_raises_ValidationError_on_unknown_names():
    with pytest.raises(ValidationError):
        parse_learner("kushilevitz")
