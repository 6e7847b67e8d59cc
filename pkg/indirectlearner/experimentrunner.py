from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from itertools import product
from threading import current_thread
from typing import Callable, Dict
import logging
import time
from .exceptions import ConfigurationError, SizeError
from .bitcore import BitString, QueryOracle, TruthTable
from .bitcore.builtins import (identity_function, random_function,
                               two_to_one_function)
from .configmanager import ExperimentConfig
from .distributions import (DyadicProb, ExactDistribution,
                            ProductDistribution, Sampler,
                            exact_output_distribution, samp)
from .inverters import (BitInverter, DistributionalInverter, ProductInverter,
                        bit_inv_distribution, enumerated_bit_outcomes,
                        success_distribution, window_width)
from .amplification import (BruteForceInverterOracle, FailingInverterOracle,
                            InverterOracle, RestrictedInverterOracle,
                            chain_distributional_inverter)
from .reduction import (check_budget, composed_error,
                        empirical_composed_error, learn_over_mu)
from .report import RunReport
from .stats import conditional_inversion_distance, run_trials
from .utils import binomial_margin, format_rational, substream


logger = logging.getLogger(__name__)

BitInverterFactory = Callable[[DyadicProb, Fraction], DistributionalInverter]


def check_bit_inverter(inverter: DistributionalInverter, p: DyadicProb,
                       b: int, gamma: Fraction) -> dict:
    """
    Compare an inverter for Samp(p) against the exact uniform distribution
    on the preimages of b and against the rejection FAIL mass.

    The outcomes come from running the inverter on real coins; a declared
    outcome_distribution is only compared against them.
    """
    if isinstance(inverter, BitInverter):
        outcomes = enumerated_bit_outcomes(inverter, b)
    else:
        outcomes = DistributionalInverter.outcome_distribution(
            inverter, BitString(b, 1))
    closed_form = inverter.outcome_distribution(BitString(b, 1))
    fail = outcomes.get(None, Fraction(0))
    preimages = {BitString(r, p.k) for r in range(1 << p.k)
                 if samp(p, BitString(r, p.k)) == b}
    sound = all(r in preimages for r in outcomes if r is not None)
    conditional = success_distribution(outcomes)
    uniform = sound and (fail == 1 or (
        len(conditional) == len(preimages) and
        all(mass == Fraction(1, len(preimages))
            for mass in conditional.values())))
    width = window_width(p, b)
    bound = p.s if b else p.complement
    rounds = getattr(inverter, "rounds", None)
    entry = {
        "p": str(p),
        "b": b,
        "gamma": format_rational(gamma),
        "fail": format_rational(fail),
        "sound": sound,
        "uniform": uniform,
        "fail_within_gamma": fail <= gamma,
        "closed_form_agrees": closed_form == outcomes,
    }
    if rounds is not None:
        rejected = Fraction((1 << width) - bound, 1 << width)
        entry["expected_fail"] = format_rational(rejected ** rounds)
        entry["fail_matches_rejection"] = fail == rejected ** rounds
    return entry


class ExperimentRunner:
    """
    Runs the harness experiments for one configuration.

    Parameters:
        config: ExperimentConfig - The validated configuration.
        bit_inverter: callable - Builds the bit inverter checked by the
                                 inverter suite, BitInverter by default.
    """

    def __init__(self, config: ExperimentConfig,
                 bit_inverter: BitInverterFactory = BitInverter):
        self.config = config
        self.bit_inverter = bit_inverter

    def run(self, command: str) -> RunReport:
        commands = {
            "learn": self.run_learn,
            "invert-suite": self.run_inverter_suite,
            "amplify": self.run_amplification_demo,
        }
        if command not in commands:
            raise ConfigurationError("unknown command '{}'".format(command))
        start_time = time.time()
        report = commands[command]()
        report.elapsed = time.time() - start_time
        logger.debug("{} finished in {:.3f}s".format(report, report.elapsed))
        return report

    def run_learn(self) -> RunReport:
        """
        Learn the target over the configured distribution `trials` times
        and measure the error of every composed hypothesis, exactly when the
        inverter and the coin space allow it.

        Raises:
            ValidationError - The configuration cannot be parsed.
            ConfigurationError - Lengths do not line up, or the inverter
                                 breaks the error budget.
            SizeError - A table exceeds its cap.
        """
        config = self.config
        f = config.target_table()
        sampler = config.sampler()
        if sampler.output_length != f.arity:
            raise ConfigurationError("distribution has {} coordinates but the "
                                     "target has arity {}"
                                     .format(sampler.output_length, f.arity))
        inverter = self.build_inverter(sampler)
        learner = config.learner()
        alpha, beta = config.alpha, config.beta
        split = config.budget_split
        cap = config.enumeration_cap
        report = RunReport("learn", config.asdict())

        budget_ok = check_budget(inverter, alpha, split,
                                 enforce=not config.allow_budget_violation)
        exact = inverter.supports_exact() and sampler.coin_length <= cap
        mu = exact_output_distribution(sampler, cap) if exact else None

        def task(run):
            logger.debug("Learning run {} on thread: {} ({})"
                         .format(run, current_thread().name,
                                 current_thread().ident))
            hypothesis = learn_over_mu(
                QueryOracle.from_map(f, name=config.values["target"]),
                sampler, inverter, learner, alpha, beta,
                substream(config.seed, "learner", run), split=split,
                default_label=config.default_label, enforce_budget=False)
            result = {"run": run, "queries": hypothesis.queries}
            if exact:
                error = composed_error(hypothesis, f, mu, cap)
                result.update({"exact": True,
                               "error": format_rational(error),
                               "value": float(error),
                               "failed": error > alpha})
            else:
                error, radius = empirical_composed_error(
                    hypothesis, f, sampler, config.evaluation_trials,
                    substream(config.seed, "evaluation", run),
                    votes=config.majority_votes)
                result.update({"exact": False,
                               "value": round(error, 12),
                               "radius": round(radius, 12),
                               "failed": error > alpha})
            return result

        with ThreadPoolExecutor(max_workers=config.workers) as executor:
            runs = list(executor.map(task, range(config.trials)))

        failures = sum(1 for run in runs if run["failed"])
        results = {
            "target": config.values["target"],
            "sampler": str(sampler),
            "learner": str(learner),
            "inverter": str(inverter),
            "exact": exact,
            "runs": runs,
            "trials": config.trials,
            "failures": failures,
            "max_error": max((run["value"] for run in runs), default=None),
            "query_budget": learner.query_budget(sampler.coin_length,
                                                 alpha * split, beta),
            "inverter_failure_bound": format_rational(inverter.failure_bound),
            "inverter_distance_bound":
                format_rational(inverter.distance_bound),
            "budget_ok": budget_ok,
        }
        if exact:
            fail_mass = sum((mass * inverter.failure_probability(x)
                             for x, mass in mu.items()), Fraction(0))
            results["inverter_fail_mass"] = format_rational(fail_mass)
        if isinstance(inverter, ProductInverter):
            results["product_bound_applies"] = inverter.fail_bound_applies
        report.results = results

        if config.trials:
            rate = failures / config.trials
            allowed = float(beta) + binomial_margin(float(beta), config.trials)
            if rate > allowed:
                report.violate("{} of {} runs exceeded alpha = {}"
                               .format(failures, config.trials, alpha))
        return report

    def run_inverter_suite(self) -> RunReport:
        """
        Check every bit inverter in the configured (p, b, gamma) grid for an
        exactly uniform output on the preimages and a FAIL mass of at most
        gamma, and every product inverter with gamma < 1/n for a FAIL mass
        of at most n * gamma that matches the per-coordinate masses.
        """
        config = self.config
        report = RunReport("invert-suite", config.asdict())
        gammas = config.suite_gammas
        entries = []
        for k in config.suite_precisions:
            if k > config.max_precision:
                raise SizeError("suite precision {} exceeds the maximum "
                                "precision {}".format(k, config.max_precision))
            for s in range(1, 1 << k):
                p = DyadicProb(s, k, max_precision=config.max_precision)
                for gamma in gammas:
                    inverter = self.bit_inverter(p, gamma)
                    for b in (0, 1):
                        entry = check_bit_inverter(inverter, p, b, gamma)
                        entries.append(entry)
                        self._flag_bit_entry(report, entry)
        products = self._check_products(report, gammas)
        report.results = {
            "bit_inverters": entries,
            "bit_checks": len(entries),
            "product_inverters": products,
        }
        return report

    def _flag_bit_entry(self, report: RunReport, entry: dict):
        name = "BitInv(p={}, b={}, gamma={})".format(entry["p"], entry["b"],
                                                     entry["gamma"])
        if not entry["sound"]:
            report.violate("{} returns a non-preimage".format(name))
        elif not entry["uniform"]:
            report.violate("{} is not uniform on the preimages".format(name))
        if not entry["fail_within_gamma"]:
            report.violate("{} fails with probability {}"
                           .format(name, entry["fail"]))
        if not entry["closed_form_agrees"]:
            report.violate("{} declares an outcome distribution that its "
                           "coins do not produce".format(name))
        if not entry.get("fail_matches_rejection", True):
            report.violate("{} FAIL mass {} differs from {}"
                           .format(name, entry["fail"],
                                   entry["expected_fail"]))

    def _check_products(self, report: RunReport, gammas) -> dict:
        config = self.config
        biases = [DyadicProb(s, k, max_precision=config.max_precision)
                  for k in range(1, config.suite_product_precision + 1)
                  for s in range(1, 1 << k)]
        bit_fail: Dict[tuple, Fraction] = {}

        def coordinate_fail(p, b, gamma):
            key = (p, b, gamma)
            if key not in bit_fail:
                bit_fail[key] = bit_inv_distribution(
                    p, b, gamma, config.enumeration_cap).get(None, Fraction(0))
            return bit_fail[key]

        checks = 0
        skipped = []
        max_fail = Fraction(0)
        for n in range(1, config.suite_coordinates + 1):
            for gamma in gammas:
                if gamma >= Fraction(1, n):
                    skipped.append({"n": n, "gamma": format_rational(gamma)})
                    continue
                for combo in product(biases, repeat=n):
                    inverter = ProductInverter(ProductDistribution(combo),
                                               gamma)
                    for x in range(1 << n):
                        x = BitString(x, n)
                        fail = inverter.failure_probability(x)
                        survive = Fraction(1)
                        for p, bit in zip(combo, x.bits()):
                            survive *= 1 - coordinate_fail(p, bit, gamma)
                        checks += 1
                        max_fail = max(max_fail, fail)
                        name = "ProdInv({}, gamma={}) at {}".format(
                            inverter.distribution, format_rational(gamma), x)
                        if fail > n * gamma:
                            report.violate("{} fails with probability {}"
                                           .format(name, fail))
                        if fail != 1 - survive:
                            report.violate("{} FAIL mass {} differs from {}"
                                           .format(name, fail, 1 - survive))
        return {"checks": checks, "max_fail": format_rational(max_fail),
                "skipped": skipped}

    def run_amplification_demo(self) -> RunReport:
        """
        Build the chained distributional inverter for the configured small
        function and measure every rung: the weak oracle on the direct
        product, the amplified inverter on the truncating hash and the
        distance of the final inverter from uniform preimages.

        Raises:
            SizeError - The function's arity exceeds max_arity.
        """
        config = self.config
        f = self.amplify_function()
        oracle = self.build_oracle()
        threshold = config.amplify_distance
        inverter = chain_distributional_inverter(
            f, 1 / threshold, oracle,
            copies=config.amplify_copies or None,
            hash_length=config.amplify_hash_length or None,
            repetitions=config.amplify_repetitions or None,
            attempts=config.amplify_attempts or None,
            cap=config.max_arity)
        rungs = inverter.rungs
        hashed, strong = rungs["truncating_hash"], rungs["strong"]
        product_map = rungs["direct_product"]
        trials, workers = config.amplify_trials, config.workers
        report = RunReport("amplify", config.asdict())

        def weak_trial(rng):
            y = product_map(product_map.random_input(rng))
            outcome = oracle.invert(product_map, y, rng)
            return not outcome.failed and product_map(outcome.preimage) == y

        def strong_trial(rng):
            y = hashed(hashed.random_input(rng))
            outcome = strong.invert(hashed, y, rng)
            return not outcome.failed and hashed(outcome.preimage) == y

        def inversion_trial(rng):
            y = f(f.random_input(rng))
            outcome = inverter.invert(y, rng)
            if not outcome.failed and f(outcome.preimage) != y:
                raise AssertionError("{} returned a non-preimage of {}"
                                     .format(inverter, y))
            return y, outcome.preimage

        weak = run_trials(weak_trial, trials, config.seed, "weak", workers)
        strong_results = run_trials(strong_trial, trials, config.seed,
                                    "strong", workers)
        observed: Dict[BitString, Counter] = {}
        failures = 0
        for y, preimage in run_trials(inversion_trial, trials, config.seed,
                                      "inversion", workers):
            observed.setdefault(y, Counter())[preimage] += 1
            failures += preimage is None
        image_mass = ExactDistribution.uniform(f.arity).pushforward(f)
        distance = conditional_inversion_distance(
            f, dict(image_mass.items()), observed)

        report.results = {
            "function": config.amplify_function,
            "arity": f.arity,
            "oracle": str(oracle),
            "truncating_hash": {
                "c": rungs["c"],
                "hash_output_length": hashed.m,
                "hash_output_length_formula": rungs["hash_output_length"],
                "arity": hashed.arity,
            },
            "direct_product": {
                "copies": strong.t,
                "arity": product_map.arity,
            },
            "weak": {
                "declared_success": format_rational(
                    oracle.success_probability),
                "success": sum(weak) / trials,
                "trials": trials,
            },
            "strong": {
                "repetitions": strong.repetitions,
                "target_success": format_rational(strong.success_probability),
                "success": sum(strong_results) / trials,
                "trials": trials,
            },
            "distributional": {
                "attempts": inverter.attempts,
                "declared_distance": format_rational(inverter.distance_bound),
                "threshold": format_rational(threshold),
                "distance": distance.asdict(),
                "fail_rate": failures / trials,
                "trials": trials,
            },
        }
        if not distance.within(threshold):
            report.violate("measured distance {} exceeds {}"
                           .format(distance, format_rational(threshold)))
        return report

    def build_inverter(self, sampler: Sampler) -> DistributionalInverter:
        config = self.config
        if config.values["inverter"] != "chained":
            return config.build_inverter(sampler)
        return chain_distributional_inverter(
            sampler, 1 / config.amplify_distance, self.build_oracle(),
            copies=config.amplify_copies or None,
            hash_length=config.amplify_hash_length or None,
            repetitions=config.amplify_repetitions or None,
            attempts=config.amplify_attempts or None,
            cap=config.enumeration_cap)

    def build_oracle(self) -> InverterOracle:
        fraction = self.config.amplify_weak_fraction
        if fraction == 0:
            return FailingInverterOracle()
        oracle = BruteForceInverterOracle()
        if fraction == 1:
            return oracle
        salt = self.config.seed.to_bytes(8, "big")
        return RestrictedInverterOracle(oracle, fraction, salt=salt)

    def amplify_function(self) -> TruthTable:
        config = self.config
        n = config.amplify_arity
        if n > config.max_arity:
            raise SizeError("amplify arity {} exceeds the enumeration cap of "
                            "{} bits".format(n, config.max_arity))
        name = config.amplify_function
        if name == "identity":
            return identity_function(n)
        if name == "product":
            sampler = config.sampler()
            return sampler.as_map().to_truth_table(config.max_arity)
        rng = substream(config.seed, "function")
        if name == "random":
            return random_function(n, n, rng)
        return two_to_one_function(n, rng)
