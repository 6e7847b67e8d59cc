from fractions import Fraction
from typing import Optional
import hashlib
import logging
import threading
import numpy as np
from ..bitcore import BitString, BooleanMap, TruthTable, bitstring
from ..inverters import FAIL, InversionOutcome, Outcomes


logger = logging.getLogger(__name__)


class InverterOracle:
    """
    Inverts any Boolean map it is handed: invert(g, y, rng) returns some x
    with g(x) = y, or FAIL. success_probability is the declared chance of
    success on y = g(x) for uniform x.
    """

    success_probability = Fraction(1)

    def invert(self, g: BooleanMap, y: BitString,
               rng: np.random.Generator) -> InversionOutcome:
        raise NotImplementedError

    def __call__(self, g, y, rng):
        return self.invert(g, y, rng)

    def __str__(self):
        return type(self).__name__


def brute_force_invert(f: BooleanMap, y: BitString,
                       coins: np.random.Generator) -> InversionOutcome:
    """
    A uniformly random preimage of y under f, or FAIL when y has none.
    """
    preimage = f.random_preimage(bitstring(y), coins)
    return FAIL if preimage is None else InversionOutcome(preimage)


def brute_force_distribution(f: BooleanMap, y: BitString) -> Outcomes:
    """
    The exact outcome distribution of brute_force_invert on y.
    """
    candidates = f.preimage_ints(bitstring(y).value)
    if not candidates:
        return {None: Fraction(1)}
    mass = Fraction(1, len(candidates))
    return {BitString(u, f.arity): mass for u in candidates}


class BruteForceInverterOracle(InverterOracle):

    success_probability = Fraction(1)

    def invert(self, g, y, rng):
        return brute_force_invert(g, y, rng)

    def __str__(self):
        return "brute_force"


class FailingInverterOracle(InverterOracle):

    success_probability = Fraction(0)

    def invert(self, g, y, rng):
        return FAIL

    def __str__(self):
        return "always_fail"


class RestrictedInverterOracle(InverterOracle):
    """
    Wraps an oracle so that it only answers on a fixed fraction of the
    images of each map.

    For a materialized TruthTable the accepted images are exactly the
    first floor(fraction * |image|) images ranked by their BLAKE2 digest.
    Implicit maps accept the images whose digest falls below the fraction
    of the digest range.
    """

    def __init__(self, base: InverterOracle, fraction: Fraction,
                 salt: bytes = b""):
        fraction = Fraction(fraction)
        if not 0 <= fraction <= 1:
            raise ValueError("fraction must lie in [0, 1], got {}"
                             .format(fraction))
        self.base = base
        self.fraction = fraction
        self.salt = salt
        self.success_probability = fraction * base.success_probability
        # (map, accepted images) for the most recent table only
        self._accepted: Optional[tuple] = None
        self._lock = threading.Lock()

    def _digest(self, y: int, length: int) -> int:
        data = self.salt + length.to_bytes(4, "big") + \
            y.to_bytes((length + 7) // 8 or 1, "big")
        return int.from_bytes(hashlib.blake2b(data, digest_size=8).digest(),
                              "big")

    def _accepted_images(self, g: TruthTable) -> frozenset:
        with self._lock:
            entry = self._accepted
            if entry is None or entry[0] is not g:
                image = g.image()
                ranked = sorted(image,
                                key=lambda y: self._digest(y, g.out_len))
                count = int(self.fraction * len(image))
                entry = (g, frozenset(ranked[:count]))
                self._accepted = entry
                logger.debug("Restricted oracle accepts {} of {} images"
                             .format(count, len(image)))
            return entry[1]

    def accepts(self, g: BooleanMap, y: BitString) -> bool:
        y = bitstring(y)
        if isinstance(g, TruthTable):
            return y.value in self._accepted_images(g)
        return self._digest(y.value, len(y)) < self.fraction * (1 << 64)

    def invert(self, g, y, rng):
        if not self.accepts(g, y):
            return FAIL
        return self.base.invert(g, y, rng)

    def __str__(self):
        return "restricted({}, {})".format(self.base, self.fraction)
