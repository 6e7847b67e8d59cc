from fractions import Fraction
from itertools import product
from typing import List, Optional
import logging
import math
import numpy as np
from ..exceptions import SizeError
from ..bitcore import (DEFAULT_MAX_ARITY, BitString, BooleanMap, TruthTable,
                       bitstring, check_arity)
from ..inverters import FAIL, InversionOutcome
from .oracles import InverterOracle


logger = logging.getLogger(__name__)


def split_blocks(u: int, count: int, width: int) -> List[int]:
    mask = (1 << width) - 1
    return [(u >> (width * (count - 1 - j))) & mask for j in range(count)]


def join_blocks(blocks, width: int) -> int:
    u = 0
    for block in blocks:
        u = (u << width) | block
    return u


class DirectProduct(BooleanMap):
    """
    f'(x_1 ... x_t) = f(x_1) ... f(x_t), held implicitly so it can be
    evaluated and inverted block by block at any arity.
    """

    def __init__(self, f: BooleanMap, t: int):
        if t < 1:
            raise ValueError("a direct product needs at least one copy")
        self.f = f
        self.t = t

    @property
    def arity(self) -> int:
        return self.t * self.f.arity

    @property
    def out_len(self) -> int:
        return self.t * self.f.out_len

    def evaluate_int(self, u: int) -> int:
        return join_blocks((self.f.evaluate_int(x)
                            for x in split_blocks(u, self.t, self.f.arity)),
                           self.f.out_len)

    def preimage_ints(self, y: int) -> List[int]:
        check_arity(self.arity, self.cap, "direct product preimage scan")
        per_block = [self.f.preimage_ints(block)
                     for block in split_blocks(y, self.t, self.f.out_len)]
        return sorted(join_blocks(choice, self.f.arity)
                      for choice in product(*per_block))

    def count_preimages(self, y: BitString) -> int:
        count = 1
        for block in split_blocks(bitstring(y).value, self.t, self.f.out_len):
            count *= len(self.f.preimage_ints(block))
        return count

    def random_preimage(self, y: BitString,
                        rng: np.random.Generator) -> Optional[BitString]:
        # independent uniform preimages per block are uniform on the product
        y = bitstring(y)
        blocks = []
        for block in y.split(*[self.f.out_len] * self.t):
            x = self.f.random_preimage(block, rng)
            if x is None:
                return None
            blocks.append(x.value)
        return BitString(join_blocks(blocks, self.f.arity), self.arity)

    def __str__(self):
        return "{}^{}".format(self.f, self.t)


def direct_product(f: BooleanMap, t: int,
                   cap: int = DEFAULT_MAX_ARITY) -> TruthTable:
    """
    The t-fold direct product of f as a truth table.

    Raises:
        SizeError - t times the arity of f exceeds the cap.
    """
    if t * f.arity > cap:
        raise SizeError("direct product of {} copies of a {}-bit function "
                        "exceeds the enumeration cap of {} bits"
                        .format(t, f.arity, cap))
    if t == 1 and isinstance(f, TruthTable):
        return f
    return DirectProduct(f, t).to_truth_table(cap)


def amplification_repetitions(t: int, q, p) -> int:
    """
    R = ceil(t * q * ln(2p)) repetitions lift a 1/q weak inverter of the
    t-fold product to a 1 - 1/p inverter of f.
    """
    return max(1, math.ceil(t * float(q) * math.log(2 * float(p))))


class AmplifiedInverter(InverterOracle):
    """
    Inverts f by planting its image among fresh images in a random block of
    the direct product and handing the whole tuple to a weak oracle.
    """

    def __init__(self, f: BooleanMap, t: int, weak: InverterOracle,
                 repetitions: int, product_map: BooleanMap = None,
                 target: Fraction = None):
        if repetitions < 1:
            raise ValueError("at least one repetition is needed")
        self.f = f
        self.t = t
        self.weak = weak
        self.repetitions = repetitions
        self.product_map = product_map or DirectProduct(f, t)
        self.success_probability = Fraction(0) if target is None \
            else Fraction(target)

    def invert(self, g: BooleanMap, y: BitString,
               rng: np.random.Generator) -> InversionOutcome:
        """
        Parameters:
            g: BooleanMap - The map being inverted; must be f.
            y: BitString - An image of f.
            rng: np.random.Generator - Coins for the fresh blocks and the
                                       weak oracle.

        Returns:
            InversionOutcome - A preimage of y, or FAIL once every
                               repetition failed.
        """
        if g is not self.f:
            raise ValueError("{} only inverts {}".format(self, self.f))
        y = bitstring(y)
        f, t = self.f, self.t
        for _ in range(self.repetitions):
            planted = int(rng.integers(0, t))
            images = [y.value if j == planted
                      else f.evaluate_int(f.random_input(rng).value)
                      for j in range(t)]
            tuple_image = BitString(join_blocks(images, f.out_len),
                                    t * f.out_len)
            outcome = self.weak.invert(self.product_map, tuple_image, rng)
            if outcome.failed:
                continue
            block = split_blocks(outcome.preimage.value, t, f.arity)[planted]
            if f.evaluate_int(block) == y.value:
                return InversionOutcome(BitString(block, f.arity))
        return FAIL

    def __str__(self):
        return "amplified({}, t={}, R={})".format(self.weak, self.t,
                                                  self.repetitions)


def weak_to_strong(f: BooleanMap, t: int, weak_inv: InverterOracle, p,
                   repetitions: int = None, q=None,
                   cap: int = DEFAULT_MAX_ARITY) -> AmplifiedInverter:
    """
    Turn an oracle that inverts the t-fold product of f with probability
    1/q into one that inverts f with probability 1 - 1/p.

    The product of a truth table is materialized when it fits within the
    cap. Implicit maps keep an implicit product.

    Parameters:
        f: BooleanMap - The function to invert.
        t: int - Number of copies in the direct product.
        weak_inv: InverterOracle - Oracle for the direct product.
        p: number - Target failure 1/p.
        repetitions: int - Overrides the computed repetition count.
        q: number - Overrides 1/weak_inv.success_probability.
    """
    if q is None and weak_inv.success_probability:
        q = 1 / weak_inv.success_probability
    if repetitions is None:
        if q is None:
            logger.warning("{} never succeeds; amplifying with a single "
                           "repetition".format(weak_inv))
            repetitions = 1
        else:
            repetitions = amplification_repetitions(t, q, p)
    else:
        logger.warning("Using {} repetitions instead of the computed "
                       "bound".format(repetitions))
    if isinstance(f, TruthTable) and t * f.arity <= cap:
        product_map = direct_product(f, t, cap)
    else:
        product_map = DirectProduct(f, t)
    logger.debug("Amplifying {} over {} copies with {} repetitions"
                 .format(weak_inv, t, repetitions))
    return AmplifiedInverter(f, t, weak_inv, repetitions,
                             product_map=product_map,
                             target=1 - Fraction(1) / Fraction(p))
