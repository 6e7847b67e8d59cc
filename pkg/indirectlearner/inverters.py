from fractions import Fraction
from typing import Dict, Optional
import logging
import numpy as np
from .exceptions import CoinLengthError, NotSupportedError, SizeError
from .bitcore import BitString, bitstring
from .distributions import (DEFAULT_ENUMERATION_CAP, DyadicProb,
                            ExactDistribution, ProductDistribution, Sampler,
                            exact_output_distribution)
from .utils import rounds_for


logger = logging.getLogger(__name__)


class InversionOutcome:
    """
    Either a preimage or FAIL.
    """

    __slots__ = ("preimage",)

    def __init__(self, preimage: Optional[BitString] = None):
        self.preimage = preimage

    @staticmethod
    def success(preimage: BitString) -> "InversionOutcome":
        return InversionOutcome(bitstring(preimage))

    @property
    def failed(self) -> bool:
        return self.preimage is None

    def __eq__(self, other):
        if not isinstance(other, InversionOutcome):
            return NotImplemented
        return self.preimage == other.preimage

    def __hash__(self):
        return hash(self.preimage)

    def __str__(self):
        return "FAIL" if self.failed else str(self.preimage)

    def __repr__(self):
        return "InversionOutcome({})".format(self)


FAIL = InversionOutcome()

# An outcome distribution maps preimages to their exact probability, with
# the None key holding the FAIL mass.
Outcomes = Dict[Optional[BitString], Fraction]


def window_width(p: DyadicProb, target_bit: int) -> int:
    """
    The C with 2^(C-1) <= numerator < 2^C, where the numerator is s for
    target bit 1 and 2^k - s for target bit 0.
    """
    numerator = p.s if target_bit else p.complement
    return numerator.bit_length()


def bit_inv_coin_length(p: DyadicProb, b: int, gamma: Fraction) -> int:
    return window_width(p, b) * rounds_for(gamma)


def bit_inv(p: DyadicProb, b: int, gamma: Fraction,
            coins: BitString) -> InversionOutcome:
    """
    Rejection-sample a uniformly random preimage of bit b under Samp(p).

    Each round reads the next C coins as a candidate y and accepts when
    y is below the numerator of the target interval. For b = 0 the
    accepted y is shifted up by s. After ceil(log2(1/gamma)) rejected
    rounds the result is FAIL.

    Parameters:
        p: DyadicProb - The bias of the sampled bit.
        b: int - The bit to invert.
        gamma: Fraction - Failure bound, in (0, 1).
        coins: BitString - Exactly C * rounds coins.

    Returns:
        InversionOutcome - A k-bit r with samp(p, r) = b, or FAIL.

    Raises:
        CoinLengthError - The coins have the wrong length.
    """
    coins = bitstring(coins)
    width = window_width(p, b)
    rounds = rounds_for(gamma)
    if len(coins) != width * rounds:
        raise CoinLengthError("BitInv({}, {}) needs {} coins, got {}"
                              .format(p, b, width * rounds, len(coins)))
    bound = p.s if b else p.complement
    for j in range(rounds):
        y = coins.slice(j * width, (j + 1) * width).value
        if y < bound:
            r = y if b else p.s + y
            return InversionOutcome(BitString(r, p.k))
    return FAIL


def bit_inv_distribution(p: DyadicProb, b: int, gamma: Fraction,
                         cap: int = DEFAULT_ENUMERATION_CAP) -> Outcomes:
    """
    Exact outcome distribution of bit_inv, by running it on every coin
    string.
    """
    length = bit_inv_coin_length(p, b, gamma)
    if length > cap:
        raise SizeError("BitInv({}, {}) uses {} coins, enumeration cap is {}"
                        .format(p, b, length, cap))
    outcomes = {}
    mass = Fraction(1, 1 << length)
    for z in range(1 << length):
        key = bit_inv(p, b, gamma, BitString(z, length)).preimage
        outcomes[key] = outcomes.get(key, Fraction(0)) + mass
    return outcomes


def success_distribution(outcomes: Outcomes) -> Dict[BitString, Fraction]:
    """
    The outcome distribution conditioned on success.
    """
    success = 1 - outcomes.get(None, Fraction(0))
    if not success:
        return {}
    return {r: mass / success for r, mass in outcomes.items()
            if r is not None}


class DistributionalInverter:
    """
    A randomized inverter for a sampler.

    coin_length is the fixed number of coins one inversion reads, or None
    when the inverter draws its coins from a numpy Generator stream.
    failure_bound and distance_bound are the declared FAIL probability and
    statistical distance of the inverter.
    """

    coin_length: Optional[int] = 0
    input_length = 0
    output_length = 0
    failure_bound = Fraction(0)
    distance_bound = Fraction(0)

    def invert(self, y: BitString, coins) -> InversionOutcome:
        raise NotImplementedError

    def sample(self, y: BitString,
               rng: np.random.Generator) -> InversionOutcome:
        if self.coin_length is None:
            return self.invert(y, rng)
        return self.invert(y, BitString.random(self.coin_length, rng))

    def outcome_distribution(self, y: BitString,
                             cap: int = DEFAULT_ENUMERATION_CAP) -> Outcomes:
        """
        Exact distribution of invert(y, z) over uniform coins z.

        Raises:
            NotSupportedError - The inverter draws coins from a stream.
            SizeError - The coin length exceeds the enumeration cap.
        """
        if self.coin_length is None:
            raise NotSupportedError("{} has no finite coin space"
                                    .format(self))
        if self.coin_length > cap:
            raise SizeError("{} uses {} coins, enumeration cap is {}"
                            .format(self, self.coin_length, cap))
        outcomes = {}
        mass = Fraction(1, 1 << self.coin_length)
        for z in range(1 << self.coin_length):
            key = self.invert(y, BitString(z, self.coin_length)).preimage
            outcomes[key] = outcomes.get(key, Fraction(0)) + mass
        return outcomes

    def supports_exact(self) -> bool:
        return self.coin_length is not None

    def failure_probability(self, y: BitString) -> Fraction:
        return self.outcome_distribution(y).get(None, Fraction(0))

    def __str__(self):
        return type(self).__name__


class BitInverter(DistributionalInverter):
    """
    BitInv for a single Samp(p), with the fixed coin layout used inside
    circuits: rounds chunks of k coins, round j reading the leading C coins
    of chunk j.
    """

    def __init__(self, p: DyadicProb, gamma: Fraction):
        self.p = p
        self.gamma = Fraction(gamma)
        self.rounds = rounds_for(self.gamma)
        self.coin_length = p.k * self.rounds
        self.input_length = 1
        self.output_length = p.k
        self.failure_bound = Fraction(1, 1 << self.rounds)
        self.distance_bound = Fraction(0)

    def _round_coins(self, b: int, coins: BitString) -> BitString:
        width = window_width(self.p, b)
        k = self.p.k
        chunks = [coins.slice(j * k, j * k + width)
                  for j in range(self.rounds)]
        result = BitString()
        for chunk in chunks:
            result = result.concat(chunk)
        return result

    def invert(self, y: BitString, coins: BitString) -> InversionOutcome:
        coins = bitstring(coins)
        if len(coins) != self.coin_length:
            raise CoinLengthError("{} needs {} coins, got {}"
                                  .format(self, self.coin_length, len(coins)))
        b = bitstring(y).value if isinstance(y, (BitString, str)) else int(y)
        return bit_inv(self.p, b, self.gamma, self._round_coins(b, coins))

    def outcome_distribution(self, y: BitString,
                             cap: int = DEFAULT_ENUMERATION_CAP) -> Outcomes:
        # Coin strings are grouped by the round that first accepts: every
        # string whose first j rounds reject and whose round j reads the
        # candidate v carries mass rejected^j / 2^C.
        b = bitstring(y).value if isinstance(y, (BitString, str)) else int(y)
        width = window_width(self.p, b)
        bound = self.p.s if b else self.p.complement
        candidate = Fraction(1, 1 << width)
        rejected = Fraction((1 << width) - bound, 1 << width)
        outcomes = {}
        reach = Fraction(1)
        for _ in range(self.rounds):
            for v in range(bound):
                r = BitString(v if b else self.p.s + v, self.p.k)
                outcomes[r] = outcomes.get(r, Fraction(0)) + reach * candidate
            reach *= rejected
        if reach:
            outcomes[None] = reach
        return outcomes

    def __str__(self):
        return "BitInv({}, gamma={})".format(self.p, self.gamma)


FULL_ENUMERATION_BITS = 12


def enumerated_bit_outcomes(inverter: BitInverter, b: int,
                            full_bits: int = FULL_ENUMERATION_BITS
                            ) -> Outcomes:
    """
    The outcome distribution of inverter.invert(b, z), found by running
    invert on real coin strings.

    Up to full_bits coins every coin string is tried. Longer layouts are
    enumerated by round prefixes: round j takes every accepted window
    value, each earlier round holds the smallest rejected window, later
    rounds and the bits outside the windows are zero. Each call carries
    the mass of the coin strings whose first accepting round is j, and
    one all-rejected call carries the FAIL mass.
    """
    y = BitString(b, 1)
    if inverter.coin_length <= full_bits:
        return DistributionalInverter.outcome_distribution(
            inverter, y, inverter.coin_length)
    p, rounds = inverter.p, inverter.rounds
    width = window_width(p, b)
    bound = p.s if b else p.complement
    rejected = Fraction((1 << width) - bound, 1 << width)
    outcomes = {}

    def run(windows, mass):
        value = 0
        for window in windows:
            value = (value << p.k) | (window << (p.k - width))
        value <<= p.k * (rounds - len(windows))
        coins = BitString(value, inverter.coin_length)
        key = inverter.invert(y, coins).preimage
        outcomes[key] = outcomes.get(key, Fraction(0)) + mass

    reach = Fraction(1)
    for j in range(rounds):
        for v in range(bound):
            run([bound] * j + [v], reach / (1 << width))
        reach *= rejected
    if reach:
        run([bound] * rounds, reach)
    return outcomes


class ProductInverter(DistributionalInverter):
    """
    ProdInv: one BitInv per coordinate, FAIL if any coordinate fails.
    """

    def __init__(self, distribution: ProductDistribution, gamma: Fraction):
        self.distribution = distribution
        self.gamma = Fraction(gamma)
        self.bit_inverters = [BitInverter(p, self.gamma)
                              for p in distribution.biases]
        self.coin_length = sum(inv.coin_length for inv in self.bit_inverters)
        self.input_length = distribution.n
        self.output_length = distribution.coin_length
        n = distribution.n
        self.failure_bound = min(Fraction(1), n * self.gamma)
        self.distance_bound = Fraction(0)
        if self.gamma >= Fraction(1, n):
            logger.warning("gamma = {} is not below 1/n = 1/{}; the n * gamma "
                           "failure bound does not apply"
                           .format(self.gamma, n))

    @property
    def fail_bound_applies(self) -> bool:
        return self.gamma < Fraction(1, self.distribution.n)

    def invert(self, y: BitString, coins: BitString) -> InversionOutcome:
        return prod_inv(y, self.distribution, self.gamma, coins)

    def outcome_distribution(self, y: BitString,
                             cap: int = DEFAULT_ENUMERATION_CAP) -> Outcomes:
        y = bitstring(y)
        combined = {BitString(): Fraction(1)}
        fail = Fraction(0)
        for bit, inverter in zip(y.bits(), self.bit_inverters):
            coordinate = inverter.outcome_distribution(bit)
            coordinate_fail = coordinate.get(None, Fraction(0))
            fail += (1 - fail) * coordinate_fail
            combined = {r.concat(ri): mass * mass_i
                        for r, mass in combined.items()
                        for ri, mass_i in coordinate.items()
                        if ri is not None}
        if fail:
            combined[None] = fail
        return combined

    def failure_probability(self, y: BitString) -> Fraction:
        # FAIL when any coordinate fails, coordinates use disjoint coins
        fail = Fraction(0)
        for bit, inverter in zip(bitstring(y).bits(), self.bit_inverters):
            coordinate = inverter.outcome_distribution(bit).get(None,
                                                                Fraction(0))
            fail += (1 - fail) * coordinate
        return fail

    def __str__(self):
        return "ProdInv({}, gamma={})".format(self.distribution, self.gamma)


def prod_inv(x: BitString, d: ProductDistribution, gamma: Fraction,
             coins: BitString) -> InversionOutcome:
    """
    Invert ProdSamp coordinate by coordinate.

    The coins hold one block of k_i * ceil(log2(1/gamma)) bits per
    coordinate, in coordinate order.

    Raises:
        CoinLengthError - The coins have the wrong length.
    """
    x = bitstring(x)
    if len(x) != d.n:
        raise ValueError("{}-bit sample given to a {}-coordinate product"
                         .format(len(x), d.n))
    coins = bitstring(coins)
    inverters = [BitInverter(p, gamma) for p in d.biases]
    widths = [inv.coin_length for inv in inverters]
    if len(coins) != sum(widths):
        raise CoinLengthError("ProdInv{} needs {} coins, got {}"
                              .format(d, sum(widths), len(coins)))
    result = BitString()
    for bit, inverter, block in zip(x.bits(), inverters,
                                    coins.split(*widths)):
        outcome = inverter.invert(bit, block)
        if outcome.failed:
            return FAIL
        result = result.concat(outcome.preimage)
    return InversionOutcome(result)


class IdentityInverter(DistributionalInverter):

    def __init__(self, n: int):
        self.coin_length = 0
        self.input_length = n
        self.output_length = n

    def invert(self, y: BitString, coins=None) -> InversionOutcome:
        return InversionOutcome(bitstring(y))

    def outcome_distribution(self, y: BitString,
                             cap: int = DEFAULT_ENUMERATION_CAP) -> Outcomes:
        return {bitstring(y): Fraction(1)}


class BruteForceInverter(DistributionalInverter):
    """
    A perfect inverter: a uniformly random preimage from the sampler's
    full table.
    """

    def __init__(self, sampler: Sampler, cap: int = DEFAULT_ENUMERATION_CAP):
        self.sampler = sampler
        self.table = sampler.as_map().to_truth_table(cap)
        self.coin_length = None
        self.input_length = sampler.output_length
        self.output_length = sampler.coin_length

    def invert(self, y: BitString,
               coins: np.random.Generator) -> InversionOutcome:
        preimage = self.table.random_preimage(y, coins)
        return FAIL if preimage is None else InversionOutcome(preimage)

    def outcome_distribution(self, y: BitString,
                             cap: int = DEFAULT_ENUMERATION_CAP) -> Outcomes:
        candidates = self.table.preimage_ints(bitstring(y).value)
        if not candidates:
            return {None: Fraction(1)}
        mass = Fraction(1, len(candidates))
        return {BitString(u, self.output_length): mass for u in candidates}

    def supports_exact(self) -> bool:
        return True


class FailingInverter(DistributionalInverter):

    def __init__(self, input_length: int, output_length: int):
        self.coin_length = 0
        self.input_length = input_length
        self.output_length = output_length
        self.failure_bound = Fraction(1)
        self.distance_bound = Fraction(1)

    def invert(self, y: BitString, coins=None) -> InversionOutcome:
        return FAIL

    def outcome_distribution(self, y: BitString,
                             cap: int = DEFAULT_ENUMERATION_CAP) -> Outcomes:
        return {None: Fraction(1)}


def fail_sentinel(preimage_length: int) -> BitString:
    # one bit longer than any preimage, so it never collides with one
    return BitString((1 << (preimage_length + 1)) - 1, preimage_length + 1)


def reference_joint_distribution(sampler: Sampler,
                                 cap: int = DEFAULT_ENUMERATION_CAP
                                 ) -> ExactDistribution:
    """
    The distribution of w o S(w) for uniform coins w.
    """
    if sampler.coin_length > cap:
        raise SizeError("sampler uses {} coins, enumeration cap is {}"
                        .format(sampler.coin_length, cap))
    mass = Fraction(1, 1 << sampler.coin_length)
    return ExactDistribution({
        BitString(w, sampler.coin_length).concat(
            BitString(sampler.sample_int(w), sampler.output_length)): mass
        for w in range(1 << sampler.coin_length)})


def joint_preimage_distribution(sampler: Sampler,
                                inverter: DistributionalInverter,
                                cap: int = DEFAULT_ENUMERATION_CAP
                                ) -> ExactDistribution:
    """
    The exact distribution of I(S(w), z) o S(w) over uniform w and z, with
    FAIL written as fail_sentinel().

    Raises:
        SizeError - A coin space exceeds the enumeration cap.
        NotSupportedError - The inverter has no finite coin space.
    """
    sentinel = fail_sentinel(sampler.coin_length)
    masses = {}
    for y, mass in exact_output_distribution(sampler, cap).items():
        for preimage, mass_z in inverter.outcome_distribution(y, cap).items():
            key = (sentinel if preimage is None else preimage).concat(y)
            masses[key] = masses.get(key, Fraction(0)) + mass * mass_z
    return ExactDistribution(masses)
