from fractions import Fraction
from typing import Union
import logging
from ..exceptions import SizeError
from ..bitcore import DEFAULT_MAX_ARITY, BooleanMap
from ..distributions import Sampler
from .directproduct import weak_to_strong
from .oracles import InverterOracle
from .truncatinghash import (HashingInverter, hash_output_length,
                             strong_to_distributional, truncating_hash)


logger = logging.getLogger(__name__)

MAX_TRUNCATION = 64


def truncation_parameter(n: int, p) -> int:
    """
    The smallest c >= 1 with 2/n^c <= 1/p.
    """
    p = Fraction(p)
    if n < 2:
        logger.warning("2/n^c cannot fall below 1/p for n = {}; using c = 1"
                       .format(n))
        return 1
    c = 1
    while Fraction(2, n ** c) > 1 / p:
        c += 1
        if c > MAX_TRUNCATION:
            raise ValueError("no truncation parameter up to {} reaches 1/{}"
                             .format(MAX_TRUNCATION, p))
    return c


def direct_product_copies(n: int, c: int) -> int:
    return n ** (6 * c)


def chain_distributional_inverter(sampler: Union[Sampler, BooleanMap], p,
                                  oracle: InverterOracle,
                                  copies: int = None,
                                  hash_length: int = None,
                                  repetitions: int = None,
                                  attempts: int = None,
                                  cap: int = DEFAULT_MAX_ARITY
                                  ) -> HashingInverter:
    """
    A distributional inverter for a sampler built from an oracle that
    inverts direct products of its truncating hash: hash the sampler,
    amplify the oracle over the direct product, then sample preimages
    through the hash.

    Parameters:
        sampler: Sampler or BooleanMap - The map from coins to samples.
        p: number - Target distance 1/p; fixes c, t and m.
        oracle: InverterOracle - Weak oracle for the direct product.
        copies: int - Desk-scale override of t = n^(6c).
        hash_length: int - Desk-scale override of m = n + (6c+6) log n.
        repetitions: int - Override of the amplification repetitions.
        attempts: int - Hash draws per inversion.

    Returns:
        HashingInverter - With `rungs` naming the intermediate maps and
                          inverters.

    Raises:
        SizeError - The sampler's coins exceed the cap.
    """
    f = sampler.as_map() if isinstance(sampler, Sampler) else sampler
    n = f.arity
    if n > cap:
        raise SizeError("sampler uses {} coins, enumeration cap is {}"
                        .format(n, cap))
    if isinstance(sampler, Sampler):
        # inverting scans the coin space, so keep the table
        f = f.to_truth_table(cap)
    c = truncation_parameter(n, p)
    hashed = truncating_hash(f, c, hash_length)
    t = direct_product_copies(n, c)
    if copies is not None and copies != t:
        logger.warning("Direct product of {} copies overrides the formula "
                       "value {}".format(copies, t))
        t = copies
    strong_target = direct_product_copies(n, c)
    strong = weak_to_strong(hashed, t, oracle, strong_target,
                            repetitions=repetitions, cap=cap)
    inverter = strong_to_distributional(f, c, strong, attempts=attempts,
                                        hashed=hashed)
    inverter.rungs = {
        "truncating_hash": hashed,
        "direct_product": strong.product_map,
        "strong": strong,
        "hash_output_length": hash_output_length(n, c),
        "c": c,
    }
    logger.debug("Chained inverter for {}: c = {}, m = {}, t = {}, R = {}"
                 .format(f, c, hashed.m, t, strong.repetitions))
    return inverter
