from collections import Counter
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Sequence
import logging
import re
import numpy as np
from .exceptions import CoinLengthError, SizeError, ValidationError
from .bitcore import BitString, BooleanMap, TruthTable, bitstring
from .utils import format_rational, parse_rational


logger = logging.getLogger(__name__)

DEFAULT_MAX_PRECISION = 16
DEFAULT_ENUMERATION_CAP = 24


class DyadicProb:
    """
    An exact bias p = s/2^k with a k-bit numerator s, 0 < s < 2^k.
    """

    def __init__(self, s: int, k: int,
                 max_precision: int = DEFAULT_MAX_PRECISION):
        if k < 1:
            raise ValueError("precision must be at least 1, got {}".format(k))
        if k > max_precision:
            raise SizeError("precision {} exceeds the maximum precision {}"
                            .format(k, max_precision))
        if not 0 < s < (1 << k):
            raise ValueError("bias {}/2^{} is not strictly inside (0, 1)"
                             .format(s, k))
        self.s = s
        self.k = k

    @property
    def value(self) -> Fraction:
        return Fraction(self.s, 1 << self.k)

    @property
    def bits(self) -> BitString:
        """
        bin(p): the k-bit big-endian encoding of the numerator.
        """
        return BitString(self.s, self.k)

    @property
    def complement(self) -> int:
        """
        Numerator of 1 - p at the same precision.
        """
        return (1 << self.k) - self.s

    @staticmethod
    def from_fraction(value: Fraction,
                      max_precision: int = DEFAULT_MAX_PRECISION
                      ) -> "DyadicProb":
        value = Fraction(value)
        denominator = value.denominator
        if denominator & (denominator - 1):
            raise ValueError("{} is not dyadic".format(value))
        k = denominator.bit_length() - 1
        return DyadicProb(value.numerator, k, max_precision=max_precision)

    @staticmethod
    def parse(text: str,
              max_precision: int = DEFAULT_MAX_PRECISION) -> "DyadicProb":
        """
        Parse "s/2^k", "a/b" with b a power of two, or "p = ..." forms.

        "s/2^k" keeps the written precision, so "2/2^2" has k = 2.
        """
        text = re.sub(r"^\s*p\s*=", "", text).strip()
        match = re.match(r"^(\d+)\s*/\s*2\s*\^\s*(\d+)$", text)
        if match:
            return DyadicProb(int(match.group(1)), int(match.group(2)),
                              max_precision=max_precision)
        return DyadicProb.from_fraction(parse_rational(text),
                                        max_precision=max_precision)

    def __eq__(self, other):
        if not isinstance(other, DyadicProb):
            return NotImplemented
        return (self.s, self.k) == (other.s, other.k)

    def __hash__(self):
        return hash((self.s, self.k))

    def __str__(self):
        return "{}/2^{}".format(self.s, self.k)

    def __repr__(self):
        return "DyadicProb({}, {})".format(self.s, self.k)


class ProductDistribution:

    def __init__(self, biases: Sequence[DyadicProb]):
        biases = tuple(biases)
        if not biases:
            raise ValueError("a product distribution needs at least one bias")
        self.biases = biases

    @property
    def n(self) -> int:
        return len(self.biases)

    @property
    def coin_lengths(self) -> List[int]:
        return [p.k for p in self.biases]

    @property
    def coin_length(self) -> int:
        return sum(self.coin_lengths)

    def probability(self, x: BitString) -> Fraction:
        x = bitstring(x)
        if len(x) != self.n:
            raise ValueError("{}-bit string under a {}-coordinate product"
                             .format(len(x), self.n))
        result = Fraction(1)
        for bit, p in zip(x.bits(), self.biases):
            result *= p.value if bit else 1 - p.value
        return result

    def exact_distribution(self) -> "ExactDistribution":
        result = ExactDistribution({BitString(): Fraction(1)})
        for p in self.biases:
            result = result.product(ExactDistribution({
                BitString(1, 1): p.value,
                BitString(0, 1): 1 - p.value,
            }))
        return result

    def sampler(self) -> "ProductSampler":
        return ProductSampler(self)

    @staticmethod
    def parse(text: str, max_precision: int = DEFAULT_MAX_PRECISION
              ) -> "ProductDistribution":
        """
        Parse one bias per line ("p = s/2^k"), or a comma separated list.

        Raises:
            ValidationError - A line is not a dyadic bias in (0, 1).
            SizeError - A precision exceeds max_precision.
        """
        items = []
        for line in text.replace(",", "\n").splitlines():
            line = line.split("#", 1)[0].strip()
            if line:
                items.append(line)
        try:
            return ProductDistribution([DyadicProb.parse(item, max_precision)
                                        for item in items])
        except SizeError:
            raise
        except ValueError as e:
            raise ValidationError(e) from e

    def __eq__(self, other):
        if not isinstance(other, ProductDistribution):
            return NotImplemented
        return self.biases == other.biases

    def __hash__(self):
        return hash(self.biases)

    def __str__(self):
        return "({})".format(", ".join(str(p) for p in self.biases))


class ExactDistribution:
    """
    A finite distribution over bit strings with exact rational masses.
    """

    def __init__(self, probabilities: Mapping[BitString, Fraction],
                 check: bool = True):
        masses = {}
        for x, mass in probabilities.items():
            mass = Fraction(mass)
            if mass < 0:
                raise ValueError("negative probability {} for {}"
                                 .format(mass, x))
            if mass:
                masses[bitstring(x)] = mass
        if check and sum(masses.values()) != 1:
            raise ValueError("probabilities sum to {}, not 1"
                             .format(sum(masses.values())))
        self._masses = masses

    @staticmethod
    def uniform(m: int) -> "ExactDistribution":
        mass = Fraction(1, 1 << m)
        return ExactDistribution({BitString(u, m): mass
                                  for u in range(1 << m)})

    @staticmethod
    def point_mass(x: BitString) -> "ExactDistribution":
        return ExactDistribution({bitstring(x): Fraction(1)})

    @staticmethod
    def from_counts(counts: Mapping[BitString, int]) -> "ExactDistribution":
        total = sum(counts.values())
        return ExactDistribution({x: Fraction(c, total)
                                  for x, c in counts.items()})

    def probability(self, x: BitString) -> Fraction:
        return self._masses.get(bitstring(x), Fraction(0))

    def items(self):
        return self._masses.items()

    def product(self, other: "ExactDistribution") -> "ExactDistribution":
        return ExactDistribution({x.concat(y): px * py
                                  for x, px in self.items()
                                  for y, py in other.items()}, check=False)

    def pushforward(self, function: Callable[[BitString], BitString]
                    ) -> "ExactDistribution":
        masses = {}
        for x, mass in self.items():
            y = function(x)
            masses[y] = masses.get(y, Fraction(0)) + mass
        return ExactDistribution(masses, check=False)

    def asdict(self) -> Dict[str, str]:
        return {str(x): format_rational(mass)
                for x, mass in sorted(self._masses.items())}

    def __len__(self):
        return len(self._masses)

    def __eq__(self, other):
        if not isinstance(other, ExactDistribution):
            return NotImplemented
        return self._masses == other._masses

    def __str__(self):
        return str(self.asdict())


class Sampler:
    """
    A deterministic map from coin_length uniform coins to samples of
    output_length bits.
    """

    coin_length = 0
    output_length = 0

    def sample_int(self, w: int) -> int:
        raise NotImplementedError

    def sample(self, coins: BitString) -> BitString:
        coins = bitstring(coins)
        if len(coins) != self.coin_length:
            raise CoinLengthError("sampler needs {} coins, got {}"
                                  .format(self.coin_length, len(coins)))
        return BitString(self.sample_int(coins.value), self.output_length)

    def __call__(self, coins: BitString) -> BitString:
        return self.sample(coins)

    def draw(self, rng: np.random.Generator) -> BitString:
        return self.sample(BitString.random(self.coin_length, rng))

    def as_map(self) -> "SamplerMap":
        return SamplerMap(self)


class SamplerMap(BooleanMap):
    """
    A sampler viewed as a function from coins to samples.
    """

    def __init__(self, sampler: Sampler):
        self.sampler = sampler

    @property
    def arity(self) -> int:
        return self.sampler.coin_length

    @property
    def out_len(self) -> int:
        return self.sampler.output_length

    def evaluate_int(self, u: int) -> int:
        return self.sampler.sample_int(u)


class ProductSampler(Sampler):

    def __init__(self, distribution: ProductDistribution):
        self.distribution = distribution
        self.coin_length = distribution.coin_length
        self.output_length = distribution.n

    def sample(self, coins: BitString) -> BitString:
        return prod_samp(self.distribution, coins)

    def sample_int(self, w: int) -> int:
        x = 0
        remaining = self.coin_length
        for p in self.distribution.biases:
            remaining -= p.k
            r = (w >> remaining) & ((1 << p.k) - 1)
            x = (x << 1) | int(r < p.s)
        return x

    def __str__(self):
        return "ProdSamp{}".format(self.distribution)


class IdentitySampler(Sampler):

    def __init__(self, n: int):
        self.coin_length = n
        self.output_length = n

    def sample_int(self, w: int) -> int:
        return w

    def __str__(self):
        return "identity({})".format(self.output_length)


class ConstantSampler(Sampler):

    def __init__(self, x: BitString, coin_length: int = 0):
        self.x = bitstring(x)
        self.coin_length = coin_length
        self.output_length = len(self.x)

    def sample_int(self, w: int) -> int:
        return self.x.value


class TableSampler(Sampler):
    """
    A sampler given by a truth table from coins to samples.
    """

    def __init__(self, table: TruthTable):
        self.table = table
        self.coin_length = table.arity
        self.output_length = table.out_len

    def sample_int(self, w: int) -> int:
        return self.table.evaluate_int(w)

    def as_map(self) -> TruthTable:
        return self.table


def samp(p: DyadicProb, r: BitString) -> int:
    """
    Sample one bit with bias p from k explicit coins: 1 iff r < s.

    Raises:
        CoinLengthError - r does not have exactly p.k bits.
    """
    r = bitstring(r)
    if len(r) != p.k:
        raise CoinLengthError("Samp({}) needs {} coins, got {}"
                              .format(p, p.k, len(r)))
    return int(r.value < p.s)


def prod_samp(d: ProductDistribution, r: BitString) -> BitString:
    """
    Sample every coordinate of d from its own block of coins, in order.

    Raises:
        CoinLengthError - r is not as long as the sum of the precisions.
    """
    r = bitstring(r)
    if len(r) != d.coin_length:
        raise CoinLengthError("ProdSamp{} needs {} coins, got {}"
                              .format(d, d.coin_length, len(r)))
    blocks = r.split(*d.coin_lengths)
    return BitString.from_bits(samp(p, block)
                               for p, block in zip(d.biases, blocks))


def exact_output_distribution(sampler: Sampler,
                              cap: int = DEFAULT_ENUMERATION_CAP
                              ) -> ExactDistribution:
    """
    Push the uniform distribution on coins through the sampler.

    Raises:
        SizeError - The coin length exceeds the enumeration cap.
    """
    if sampler.coin_length > cap:
        raise SizeError("sampler uses {} coins, enumeration cap is {}"
                        .format(sampler.coin_length, cap))
    counts = Counter(sampler.sample_int(w)
                     for w in range(1 << sampler.coin_length))
    total = 1 << sampler.coin_length
    return ExactDistribution({BitString(x, sampler.output_length):
                              Fraction(c, total)
                              for x, c in counts.items()})
