from fractions import Fraction
import pytest
import numpy as np
from indirectlearner.bitcore import BitString, all_bitstrings, bitstring
from indirectlearner.distributions import (DyadicProb, IdentitySampler,
                                           ProductDistribution, prod_samp)
from indirectlearner.exceptions import (CoinLengthError, NotSupportedError,
                                        SizeError)
from indirectlearner.inverters import (FAIL, BitInverter, BruteForceInverter,
                                       DistributionalInverter,
                                       FailingInverter, IdentityInverter,
                                       InversionOutcome,
                                       ProductInverter, bit_inv,
                                       bit_inv_coin_length,
                                       bit_inv_distribution,
                                       enumerated_bit_outcomes,
                                       joint_preimage_distribution,
                                       prod_inv, reference_joint_distribution,
                                       success_distribution, window_width)
from indirectlearner.stats import statistical_distance


THREE_QUARTERS = DyadicProb(3, 2)


def product(*biases):
    return ProductDistribution([DyadicProb.parse(p) for p in biases])


def test_window_width_of_three_quarters_is_2_for_bit_1():
    assert window_width(THREE_QUARTERS, 1) == 2


def test_window_width_of_three_quarters_is_1_for_bit_0():
    assert window_width(THREE_QUARTERS, 0) == 1


def test_window_width_of_a_fair_coin_is_1():
    assert window_width(DyadicProb(1, 1), 1) == 1


def test_bit_inv_is_uniform_on_the_three_preimages_of_1():
    outcomes = bit_inv_distribution(THREE_QUARTERS, 1, Fraction(1, 4))
    conditional = success_distribution(outcomes)
    assert conditional == {bitstring(r): Fraction(1, 3)
                           for r in ("00", "01", "10")}


def test_bit_inv_returns_the_sole_preimage_of_0():
    outcomes = bit_inv_distribution(THREE_QUARTERS, 0, Fraction(1, 4))
    assert set(success_distribution(outcomes)) == {bitstring("11")}


def test_bit_inv_fails_with_probability_one_sixteenth_over_two_rounds():
    outcomes = bit_inv_distribution(THREE_QUARTERS, 1, Fraction(1, 4))
    assert outcomes[None] == Fraction(1, 16)


def test_bit_inv_raises_CoinLengthError_on_the_wrong_number_of_coins():
    with pytest.raises(CoinLengthError):
        bit_inv(THREE_QUARTERS, 1, Fraction(1, 4), "101")


def test_bit_inv_coin_length_is_the_window_times_the_rounds():
    assert bit_inv_coin_length(THREE_QUARTERS, 1, Fraction(1, 8)) == 6


def test_bit_inv_raises_ValueError_for_gamma_outside_the_open_interval():
    with pytest.raises(ValueError):
        bit_inv(THREE_QUARTERS, 1, Fraction(1), "")


@pytest.mark.parametrize("s, k", [(1, 1), (3, 2), (5, 3), (7, 3), (9, 4)])
@pytest.mark.parametrize("gamma", [Fraction(1, 2), Fraction(1, 4)])
def test_bit_inverter_outcome_distribution_matches_coin_enumeration(
        s, k, gamma):
    p = DyadicProb(s, k)
    inverter = BitInverter(p, gamma)
    for b in (0, 1):
        enumerated = DistributionalInverter.outcome_distribution(inverter, b)
        assert inverter.outcome_distribution(b) == enumerated


def test_bit_inverter_failure_is_at_most_gamma():
    for s in range(1, 16):
        inverter = BitInverter(DyadicProb(s, 4), Fraction(1, 8))
        for b in (0, 1):
            assert inverter.failure_probability(b) <= Fraction(1, 8)


def test_prod_inv_is_uniform_on_the_preimages_of_10():
    d = product("3/4", "3/4")
    inverter = ProductInverter(d, Fraction(1, 4))
    conditional = success_distribution(inverter.outcome_distribution("10"))
    expected = {bitstring(r) for r in ("0011", "0111", "1011")}
    assert set(conditional) == expected
    assert all(mass == Fraction(1, 3) for mass in conditional.values())


def test_prod_inv_returns_preimages_only():
    d = product("3/4", "5/8")
    gamma = Fraction(1, 4)
    inverter = ProductInverter(d, gamma)
    rng = np.random.default_rng(2)
    for x in all_bitstrings(2):
        for _ in range(20):
            coins = BitString.random(inverter.coin_length, rng)
            outcome = prod_inv(x, d, gamma, coins)
            assert outcome.failed or prod_samp(d, outcome.preimage) == x


def test_prod_inv_of_a_fair_coin_returns_its_sole_preimage():
    d = product("1/2")
    gamma = Fraction(1, 8)
    outcomes = ProductInverter(d, gamma).outcome_distribution("1")
    assert set(outcomes) <= {bitstring("0"), None}
    assert outcomes[bitstring("0")] >= 1 - gamma


def test_prod_inv_failure_of_three_coordinates_matches_the_product_formula():
    d = product("3/4", "3/4", "3/4")
    inverter = ProductInverter(d, Fraction(1, 8))
    fail = inverter.failure_probability("111")
    assert fail == 1 - (1 - Fraction(1, 64)) ** 3
    assert fail <= Fraction(3, 8)
    assert inverter.outcome_distribution("111")[None] == fail


def test_prod_inv_raises_CoinLengthError_on_the_wrong_number_of_coins():
    with pytest.raises(CoinLengthError):
        prod_inv("11", product("3/4", "3/4"), Fraction(1, 4), "1")


def test_new_ProductInverter_warns_when_gamma_is_not_below_1_over_n(caplog):
    inverter = ProductInverter(product("1/2", "1/2", "1/2", "1/2"),
                               Fraction(1, 2))
    assert not inverter.fail_bound_applies
    assert "does not apply" in caplog.text


def test_joint_distribution_of_a_perfect_inverter_is_the_reference():
    sampler = product("3/4", "1/2").sampler()
    inverter = BruteForceInverter(sampler)
    assert joint_preimage_distribution(sampler, inverter) == \
        reference_joint_distribution(sampler)


def test_joint_distance_of_prod_inv_is_its_fail_mass():
    d = product("3/4")
    sampler = d.sampler()
    inverter = ProductInverter(d, Fraction(1, 16))
    distance = statistical_distance(
        reference_joint_distribution(sampler),
        joint_preimage_distribution(sampler, inverter))
    assert distance == Fraction(3, 4) * Fraction(1, 256) + \
        Fraction(1, 4) * Fraction(1, 16)
    assert distance <= Fraction(1, 16)


def test_joint_distance_of_an_always_failing_inverter_is_1():
    sampler = product("3/4", "1/2").sampler()
    inverter = FailingInverter(2, 3)
    distance = statistical_distance(
        reference_joint_distribution(sampler),
        joint_preimage_distribution(sampler, inverter))
    assert distance == 1


def test_identity_inverter_returns_its_input():
    assert IdentityInverter(3).invert("101") == \
        IdentityInverter(3).invert(bitstring("101"))
    assert IdentityInverter(3).invert("101").preimage == bitstring("101")


def test_brute_force_inverter_returns_a_preimage():
    sampler = product("1/2").sampler()
    inverter = BruteForceInverter(sampler)
    outcome = inverter.invert(bitstring("1"), np.random.default_rng(0))
    assert outcome != FAIL
    assert sampler.sample(outcome.preimage) == bitstring("1")


def test_brute_force_inverter_raises_SizeError_above_the_cap():
    with pytest.raises(SizeError):
        BruteForceInverter(IdentitySampler(8), cap=4)


def test_outcome_distribution_raises_NotSupportedError_for_stream_coins():
    inverter = BruteForceInverter(IdentitySampler(2))
    with pytest.raises(NotSupportedError):
        DistributionalInverter.outcome_distribution(inverter, "01")


class CountingBitInverter(BitInverter):

    calls = 0

    def invert(self, y, coins):
        self.calls += 1
        return super().invert(y, coins)


def test_enumerated_bit_outcomes_tries_every_coin_string_when_short():
    inverter = CountingBitInverter(DyadicProb(5, 3), Fraction(1, 4))
    outcomes = enumerated_bit_outcomes(inverter, 1)
    assert inverter.calls == 1 << 6
    assert outcomes == inverter.outcome_distribution(1)


@pytest.mark.parametrize("s", [1, 21, 32, 63])
@pytest.mark.parametrize("b", [0, 1])
def test_enumerated_bit_outcomes_runs_invert_by_round_prefixes(s, b):
    p = DyadicProb(s, 6)
    inverter = CountingBitInverter(p, Fraction(1, 8))
    assert inverter.coin_length == 18
    outcomes = enumerated_bit_outcomes(inverter, b)
    bound = s if b else 64 - s
    assert inverter.calls == 3 * bound + 1
    assert outcomes == inverter.outcome_distribution(b)


def test_enumerated_bit_outcomes_sees_a_non_preimage_after_rejections():
    class Boundary(BitInverter):
        def invert(self, y, coins):
            outcome = super().invert(y, coins)
            if outcome.failed:
                return InversionOutcome(BitString(self.p.s, self.p.k))
            return outcome

    inverter = Boundary(DyadicProb(21, 6), Fraction(1, 8))
    outcomes = enumerated_bit_outcomes(inverter, 1)
    assert outcomes != inverter.outcome_distribution(1)
    assert BitString(21, 6) in outcomes
