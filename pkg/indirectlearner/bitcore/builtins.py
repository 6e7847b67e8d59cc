from typing import Callable, Dict
import numpy as np
from ..exceptions import ValidationError
from .truthtable import TruthTable


def _popcount(u: int) -> int:
    return bin(u).count("1")


def and_function(n: int) -> TruthTable:
    full = (1 << n) - 1
    return TruthTable.from_function(n, 1, lambda u: int(u == full))


def or_function(n: int) -> TruthTable:
    return TruthTable.from_function(n, 1, lambda u: int(u != 0))


def parity_function(n: int) -> TruthTable:
    return TruthTable.from_function(n, 1, lambda u: _popcount(u) & 1)


def majority_function(n: int) -> TruthTable:
    return TruthTable.from_function(n, 1,
                                    lambda u: int(2 * _popcount(u) > n))


def constant_function(n: int, bit: int) -> TruthTable:
    return TruthTable(n, 1, [bit] * (1 << n))


def dictator_function(n: int, i: int = 0) -> TruthTable:
    # bit i counted from the left, as in BitString indexing
    shift = n - 1 - i
    return TruthTable.from_function(n, 1, lambda u: (u >> shift) & 1)


def identity_function(n: int) -> TruthTable:
    return TruthTable.from_function(n, n, lambda u: u)


def not_function(n: int) -> TruthTable:
    full = (1 << n) - 1
    return TruthTable.from_function(n, n, lambda u: full ^ u)


def two_to_one_function(n: int, rng: np.random.Generator = None) -> TruthTable:
    """
    A function on n bits where every image has exactly two preimages.

    Without a generator the pairs are {u, u xor 1}; with one the inputs are
    paired by a random permutation and mapped to random distinct images.
    """
    if n < 1:
        raise ValueError("a 2-to-1 function needs at least one input bit")
    if rng is None:
        return TruthTable.from_function(n, n, lambda u: u >> 1)
    order = rng.permutation(1 << n)
    images = rng.permutation(1 << n)[:1 << (n - 1)]
    outputs = [0] * (1 << n)
    for j, u in enumerate(order):
        outputs[int(u)] = int(images[j // 2])
    return TruthTable(n, n, outputs)


def random_function(n: int, out_len: int,
                    rng: np.random.Generator) -> TruthTable:
    outputs = rng.integers(0, 1 << out_len, size=1 << n)
    return TruthTable(n, out_len, [int(y) for y in outputs])


BOOLEAN_FUNCTIONS: Dict[str, Callable[[int], TruthTable]] = {
    "and": and_function,
    "or": or_function,
    "parity": parity_function,
    "majority": majority_function,
    "constant0": lambda n: constant_function(n, 0),
    "constant1": lambda n: constant_function(n, 1),
    "dictator": dictator_function,
}


def builtin_function(name: str, n: int) -> TruthTable:
    """
    A named Boolean target on n bits.

    Raises:
        ValidationError - There is no builtin with this name.
    """
    key = name.strip().lower()
    if key not in BOOLEAN_FUNCTIONS:
        raise ValidationError("unknown builtin function '{}' (known: {})"
                              .format(name, ", ".join(sorted(
                                  BOOLEAN_FUNCTIONS))))
    return BOOLEAN_FUNCTIONS[key](n)
