from fractions import Fraction
from typing import List, Tuple
import logging
import numpy as np
from ..bitcore import BitString, BooleanMap, bitstring
from ..inverters import FAIL, DistributionalInverter, InversionOutcome
from ..utils import ceil_log2, random_int
from .hashfamily import HashFamily, HashFunction
from .oracles import InverterOracle


logger = logging.getLogger(__name__)


def hash_output_length(n: int, c: int) -> int:
    """
    m = n + (6c + 6) * ceil(log2 n).
    """
    return n + (6 * c + 6) * ceil_log2(n)


def index_width(m: int) -> int:
    """
    Bits used to write a truncation length i in [0, m].
    """
    return max(m.bit_length(), 1)


class TruncatingHash(BooleanMap):
    """
    f'(h, i, x) = h . i . f(x) . h(x)|i, where h(x)|i keeps the first i
    bits of h(x) and zero-fills the rest of an m-bit field.

    Inputs are laid out as the hash description (A row-major, then b), the
    index i in index_width(m) bits and x. An index above m is read modulo
    m + 1, so the map is total.
    """

    def __init__(self, f: BooleanMap, m: int):
        if m < 1:
            raise ValueError("hash output length must be at least 1")
        self.f = f
        self.m = m
        self.family = HashFamily(f.arity, m)
        self.width = index_width(m)

    @property
    def arity(self) -> int:
        return self.family.description_length + self.width + self.f.arity

    @property
    def out_len(self) -> int:
        return self.family.description_length + self.width + \
            self.f.out_len + self.m

    def decode(self, u: int) -> Tuple[HashFunction, int, int]:
        """
        Split an input into (h, i, x), with i reduced into [0, m].
        """
        n = self.f.arity
        x = u & ((1 << n) - 1)
        raw = (u >> n) & ((1 << self.width) - 1)
        description = u >> (n + self.width)
        h = HashFunction.from_description(
            n, self.m, BitString(description, self.family.description_length))
        return h, raw % (self.m + 1), x

    def encode_input(self, h: HashFunction, i: int, x: int) -> int:
        return (((h.describe().value << self.width) | i) << self.f.arity) | x

    def encode_image(self, h: HashFunction, i: int, fx: int,
                     kept: int) -> int:
        """
        The image h . i . f(x) . w where kept holds the i prefix bits w.
        """
        if not 0 <= i <= self.m:
            raise ValueError("index {} outside [0, {}]".format(i, self.m))
        head = (h.describe().value << self.width) | i
        padded = kept << (self.m - i)
        return (((head << self.f.out_len) | fx) << self.m) | padded

    def evaluate_int(self, u: int) -> int:
        h, i, x = self.decode(u)
        kept = h.evaluate_int(x) >> (self.m - i)
        return self.encode_image(h, i, self.f.evaluate_int(x), kept)

    def preimage_ints(self, y: int) -> List[int]:
        m, n, width = self.m, self.f.arity, self.width
        padded = y & ((1 << m) - 1)
        fx = (y >> m) & ((1 << self.f.out_len) - 1)
        i = (y >> (m + self.f.out_len)) & ((1 << width) - 1)
        description = y >> (m + self.f.out_len + width)
        if i > m or padded & ((1 << (m - i)) - 1):
            return []
        h = HashFunction.from_description(
            n, m, BitString(description, self.family.description_length))
        kept = padded >> (m - i)
        xs = [x for x in self.f.preimage_ints(fx)
              if h.evaluate_int(x) >> (m - i) == kept]
        raws = [r for r in range(1 << width) if r % (m + 1) == i]
        return sorted((((description << width) | r) << n) | x
                      for r in raws for x in xs)

    def __str__(self):
        return "TruncatingHash({}, m={})".format(self.f, self.m)


def truncating_hash(f: BooleanMap, c: int, m: int = None) -> TruncatingHash:
    """
    The c-truncating hash of f.

    Parameters:
        f: BooleanMap - The hashed function.
        c: int - Truncation parameter; sets m = n + (6c + 6) ceil(log2 n).
        m: int - Desk-scale override of the hash output length.
    """
    formula = hash_output_length(f.arity, c)
    if m is None:
        m = formula
    elif m != formula:
        logger.warning("Hash output length {} overrides the formula value {}"
                       .format(m, formula))
    return TruncatingHash(f, m)


class HashingInverter(DistributionalInverter):
    """
    Inverts f through a strong inverter for its truncating hash: pick a
    random hash h, a random length i in [0, m] and a random i-bit string w,
    ask for a preimage of h . i . y . w and keep its x component.

    A failed or inconsistent answer is retried with fresh (h, i, w) up to
    `attempts` times before the result is FAIL.
    """

    def __init__(self, hashed: TruncatingHash, strong: InverterOracle,
                 c: int, attempts: int = 1):
        if attempts < 1:
            raise ValueError("at least one attempt is needed")
        f = hashed.f
        self.hashed = hashed
        self.strong = strong
        self.c = c
        self.attempts = attempts
        self.coin_length = None
        self.input_length = f.out_len
        self.output_length = f.arity
        bound = min(Fraction(1), Fraction(2, max(f.arity, 1) ** c))
        self.distance_bound = bound
        self.failure_bound = bound

    def invert(self, y: BitString,
               coins: np.random.Generator) -> InversionOutcome:
        y = bitstring(y)
        hashed, f = self.hashed, self.hashed.f
        for _ in range(self.attempts):
            h = hashed.family.random(coins)
            i = int(coins.integers(0, hashed.m + 1))
            kept = random_int(coins, i)
            image = hashed.encode_image(h, i, y.value, kept)
            outcome = self.strong.invert(
                hashed, BitString(image, hashed.out_len), coins)
            if outcome.failed:
                continue
            _, _, x = hashed.decode(outcome.preimage.value)
            if f.evaluate_int(x) == y.value:
                return InversionOutcome(BitString(x, f.arity))
            logger.debug("Discarding an inconsistent preimage of {}".format(y))
        return FAIL

    def __str__(self):
        return "HashingInverter({}, attempts={})".format(self.strong,
                                                         self.attempts)


def default_attempts(m: int) -> int:
    return 8 * (m + 1)


def strong_to_distributional(f: BooleanMap, c: int,
                             strong_inv: InverterOracle, m: int = None,
                             attempts: int = None,
                             hashed: TruncatingHash = None
                             ) -> HashingInverter:
    """
    Build a distributional inverter for f from a strong inverter for its
    c-truncating hash.

    Parameters:
        f: BooleanMap - The function to invert.
        c: int - Truncation parameter.
        strong_inv: InverterOracle - Oracle for the truncating hash.
        m: int - Desk-scale hash output length.
        attempts: int - Fresh (h, i, w) draws per inversion.
        hashed: TruncatingHash - A prebuilt truncating hash of f.

    Returns:
        HashingInverter - Declares distance 2/n^c.
    """
    if hashed is None:
        hashed = truncating_hash(f, c, m)
    if attempts is None:
        attempts = default_attempts(hashed.m)
    return HashingInverter(hashed, strong_inv, c, attempts)
