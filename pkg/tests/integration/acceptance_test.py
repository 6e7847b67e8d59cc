"""
Long-running checks of the exact guarantees behind the toolkit: uniform
bit inversion, the product FAIL bound, the error decomposition, end-to-end
learning, the learner's contract, the hash family and the amplification
chain, all at desk scale.
"""
from collections import Counter
from fractions import Fraction
from itertools import product
import io
import pytest
import numpy as np
from helpers.brokeninverter import BoundaryBitInverter
from indirectlearner import ExperimentConfig, ExperimentRunner
from indirectlearner.amplification import (BruteForceInverterOracle,
                                           HashFamily,
                                           RestrictedInverterOracle,
                                           is_hereditarily_universal,
                                           strong_to_distributional,
                                           weak_to_strong)
from indirectlearner.bitcore import (QueryOracle, TruthTable,
                                     random_function, two_to_one_function)
from indirectlearner.cli import EXIT_OK, EXIT_VIOLATION, run_command
from indirectlearner.distributions import (DyadicProb, ExactDistribution,
                                           IdentitySampler,
                                           ProductDistribution)
from indirectlearner.inverters import (BitInverter, DistributionalInverter,
                                       IdentityInverter, ProductInverter)
from indirectlearner.learners import TableHypothesis, low_degree_learn
from indirectlearner.reduction import error_decomposition
from indirectlearner.stats import conditional_inversion_distance, error_rate
from indirectlearner.utils import binomial_margin, substream


def run(command, **values):
    return ExperimentRunner(ExperimentConfig(**values)).run(command)


def test_bit_inverters_up_to_precision_6_are_exactly_uniform():
    report = run("invert-suite", suite_precisions="1, 2, 3, 4, 5, 6",
                 suite_gammas="1/2, 1/4, 1/8", suite_coordinates=0)
    entries = report.results["bit_inverters"]
    assert report.passed
    assert len(entries) == 120 * 3 * 2
    assert all(e["sound"] and e["uniform"] for e in entries)
    assert all(e["closed_form_agrees"] for e in entries)


def test_bit_inverter_analysis_matches_the_full_coin_space():
    for k in (1, 2, 3):
        for s in range(1, 1 << k):
            for gamma in (Fraction(1, 2), Fraction(1, 4), Fraction(1, 8)):
                inverter = BitInverter(DyadicProb(s, k), gamma)
                for b in (0, 1):
                    enumerated = DistributionalInverter.outcome_distribution(
                        inverter, b)
                    assert inverter.outcome_distribution(b) == enumerated


def test_product_inverters_fail_at_most_n_gamma():
    report = run("invert-suite", suite_precisions="",
                 suite_gammas="1/2, 1/4, 1/8", suite_coordinates=3,
                 suite_product_precision=3)
    products = report.results["product_inverters"]
    assert report.passed
    # 7 + 3 + 1 biases up to precision 3
    assert products["checks"] == 11 * 2 * 3 + 11 ** 2 * 4 * 2 + \
        11 ** 3 * 8 * 2


def decomposition_grid():
    rng = np.random.default_rng(2024)
    biases = ["1/2", "1/4", "3/4", "3/8", "5/8"]
    for n in (1, 2):
        for outputs in product((0, 1), repeat=1 << n):
            f = TruthTable(n, 1, outputs)
            for combo in product(biases, repeat=n):
                yield f, ProductDistribution.parse(", ".join(combo)), rng
    for _ in range(8):
        f = random_function(3, 1, rng)
        yield f, ProductDistribution.parse("3/4, 1/2, 5/8"), rng


def test_error_decomposition_holds_exactly_on_the_grid():
    checked = 0
    for f, d, rng in decomposition_grid():
        sampler = d.sampler()
        hypotheses = [TableHypothesis(random_function(sampler.coin_length,
                                                      1, rng))
                      for _ in range(2)]
        for gamma in (Fraction(1, 2), Fraction(1, 4)):
            inverter = ProductInverter(d, gamma)
            for hypothesis in hypotheses:
                assert error_decomposition(f, sampler, inverter,
                                           hypothesis).holds()
                checked += 1
    for n in (1, 2, 3):
        for outputs in product((0, 1), repeat=1 << n):
            f = TruthTable(n, 1, outputs)
            hypothesis = TableHypothesis(f)
            decomposition = error_decomposition(
                f, IdentitySampler(n), IdentityInverter(n), hypothesis)
            assert decomposition.distance == 0
            assert decomposition.gap == 0
            checked += 1
    assert checked > 0


@pytest.mark.parametrize("target", ["and", "or", "parity", "majority"])
def test_learning_over_3_4_products_stays_below_alpha(target):
    report = run("learn", target=target, arity=3,
                 distribution="3/4, 3/4, 3/4", learner="brute_force",
                 gamma="1/2^10", alpha="1/16", trials=100)
    results = report.results
    assert report.passed
    assert results["exact"]
    assert results["failures"] == 0
    assert all(Fraction(r["error"]) <= Fraction(1, 16)
               for r in results["runs"])


def degree_2_targets():
    return {
        "dictator": TruthTable.from_function(4, 1, lambda u: u >> 3),
        "parity2": TruthTable.from_function(
            4, 1, lambda u: ((u >> 3) ^ (u >> 2)) & 1),
        "and2": TruthTable.from_function(4, 1, lambda u: int(u >> 2 == 3)),
    }


@pytest.mark.parametrize("epsilon,delta", [(0.1, 0.1), (0.05, 0.05)])
def test_low_degree_learner_meets_its_failure_rate(epsilon, delta):
    runs = 200
    for name, target in degree_2_targets().items():
        uniform = ExactDistribution.uniform(4)
        failures = 0
        for run_index in range(runs):
            hypothesis = low_degree_learn(
                QueryOracle.from_map(target), 4, 2, Fraction(epsilon),
                Fraction(delta), substream(99, name, run_index))
            error = error_rate(hypothesis.to_truth_table(), target, uniform)
            failures += error > epsilon
        allowed = delta + binomial_margin(delta, runs)
        assert failures / runs <= allowed, name


def test_affine_hash_families_up_to_4_bits_are_hereditarily_universal():
    for n in range(1, 5):
        for m in range(1, 5):
            assert is_hereditarily_universal(HashFamily(n, m)), (n, m)


def test_weak_to_strong_lifts_a_quarter_oracle_above_0_9():
    successes = 0
    trials = 0
    for index in range(20):
        rng = substream(5, "functions", index)
        f = random_function(4, 4, rng)
        weak = RestrictedInverterOracle(BruteForceInverterOracle(),
                                        Fraction(1, 4),
                                        salt=index.to_bytes(4, "big"))
        strong = weak_to_strong(f, 2, weak, 20)
        for _ in range(500):
            y = f(f.random_input(rng))
            outcome = strong.invert(f, y, rng)
            successes += not outcome.failed and f(outcome.preimage) == y
            trials += 1
    assert successes / trials >= 0.9


def test_chained_inverter_on_two_to_one_functions_is_close_to_uniform():
    trials = 100000
    for index in range(2):
        rng = substream(6, "two_to_one", index)
        f = two_to_one_function(4, rng)
        inverter = strong_to_distributional(f, 2, BruteForceInverterOracle(),
                                            m=6)
        observed = {}
        for _ in range(trials):
            y = f(f.random_input(rng))
            outcome = inverter.invert(y, rng)
            observed.setdefault(y, Counter())[outcome.preimage] += 1
        image_mass = ExactDistribution.uniform(4).pushforward(f)
        distance = conditional_inversion_distance(f, dict(image_mass.items()),
                                                  observed)
        assert distance.distance <= 0.15


def test_every_harness_command_is_byte_identical_under_a_fixed_seed():
    commands = [
        ["learn", "--set", "trials=10"],
        ["invert-suite", "--set", "suite_precisions=1, 2, 3"],
        ["amplify", "--set", "amplify_arity=3", "--set",
         "amplify_trials=500", "--set", "amplify_repetitions=3"],
    ]
    for argv in commands:
        outputs = []
        for _ in range(2):
            stdout = io.StringIO()
            assert run_command(argv + ["--seed", "12"],
                               stdout=stdout) == EXIT_OK
            outputs.append(stdout.getvalue())
        assert outputs[0] == outputs[1]


def test_invert_suite_exits_3_on_a_broken_inverter():
    def runner(config):
        return ExperimentRunner(config, bit_inverter=BoundaryBitInverter)

    code = run_command(["invert-suite", "--set", "suite_precisions=1, 2",
                        "--set", "suite_coordinates=0"], runner=runner,
                       stdout=io.StringIO())
    assert code == EXIT_VIOLATION
