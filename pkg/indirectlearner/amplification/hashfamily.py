from itertools import combinations
from typing import List, Sequence
import logging
import numpy as np
from ..exceptions import SizeError
from ..bitcore import BitString, bitstring
from ..utils import parity, parity_array, random_int


logger = logging.getLogger(__name__)

DEFAULT_FAMILY_CAP = 24


class HashFunction:
    """
    An affine map h(x) = A.x + b over GF(2) from n bits to m bits.

    Row j of A is an n-bit integer whose leading bit multiplies the
    leftmost input bit; output bit j is the j-th bit from the left.
    """

    __slots__ = ("n", "m", "rows", "offset")

    def __init__(self, n: int, m: int, rows: Sequence[int], offset: int):
        rows = tuple(int(row) for row in rows)
        if len(rows) != m:
            raise ValueError("an {}-bit hash needs {} rows, got {}"
                             .format(m, m, len(rows)))
        if any(not 0 <= row < (1 << n) for row in rows):
            raise ValueError("hash rows must be {}-bit integers".format(n))
        if not 0 <= offset < (1 << m):
            raise ValueError("hash offset must be an {}-bit integer"
                             .format(m))
        self.n = n
        self.m = m
        self.rows = rows
        self.offset = offset

    def evaluate_int(self, x: int) -> int:
        out = 0
        for row in self.rows:
            out = (out << 1) | parity(row & x)
        return out ^ self.offset

    def __call__(self, x: BitString) -> BitString:
        x = bitstring(x)
        if len(x) != self.n:
            raise ValueError("{}-bit input given to a hash on {} bits"
                             .format(len(x), self.n))
        return BitString(self.evaluate_int(x.value), self.m)

    def truncate(self, i: int) -> "HashFunction":
        """
        The hash made of the first i output bits.
        """
        if not 0 <= i <= self.m:
            raise ValueError("cannot keep {} of {} output bits"
                             .format(i, self.m))
        return HashFunction(self.n, i, self.rows[:i],
                            self.offset >> (self.m - i))

    @property
    def description_length(self) -> int:
        return self.m * self.n + self.m

    def describe(self) -> BitString:
        """
        The canonical description: A row-major, then b.
        """
        value = 0
        for row in self.rows:
            value = (value << self.n) | row
        value = (value << self.m) | self.offset
        return BitString(value, self.description_length)

    @staticmethod
    def from_description(n: int, m: int, description) -> "HashFunction":
        description = bitstring(description)
        if len(description) != m * n + m:
            raise ValueError("a hash from {} to {} bits is described by {} "
                             "bits, got {}".format(n, m, m * n + m,
                                                   len(description)))
        value = description.value
        offset = value & ((1 << m) - 1)
        value >>= m
        mask = (1 << n) - 1
        rows = [(value >> (n * (m - 1 - j))) & mask for j in range(m)]
        return HashFunction(n, m, rows, offset)

    def __eq__(self, other):
        if not isinstance(other, HashFunction):
            return NotImplemented
        return (self.n, self.m, self.rows, self.offset) == \
            (other.n, other.m, other.rows, other.offset)

    def __hash__(self):
        return hash((self.n, self.m, self.rows, self.offset))

    def __repr__(self):
        return "HashFunction(n={}, m={}, {})".format(self.n, self.m,
                                                    self.describe())


class HashFamily:
    """
    All affine maps from n to m bits. Pairwise independent, and so is the
    family of its i-bit prefixes for every i <= m.
    """

    def __init__(self, n: int, m: int):
        if n < 1 or m < 0:
            raise ValueError("a hash family needs n >= 1 and m >= 0")
        self.n = n
        self.m = m

    @property
    def description_length(self) -> int:
        return self.m * self.n + self.m

    @property
    def size(self) -> int:
        return 1 << self.description_length

    def random(self, rng: np.random.Generator) -> HashFunction:
        rows = [random_int(rng, self.n) for _ in range(self.m)]
        return HashFunction(self.n, self.m, rows, random_int(rng, self.m))

    def member(self, index: int) -> HashFunction:
        return HashFunction.from_description(
            self.n, self.m, BitString(index, self.description_length))

    def evaluation_table(self, cap: int = DEFAULT_FAMILY_CAP) -> np.ndarray:
        """
        A (size, 2^n) array holding h(x) for every member h, indexed by its
        description, and every input x.

        Raises:
            SizeError - The family is larger than 2^cap members.
        """
        if self.description_length > cap:
            raise SizeError("hash family described by {} bits exceeds the "
                            "enumeration cap of {} bits"
                            .format(self.description_length, cap))
        n, m = self.n, self.m
        index = np.arange(self.size, dtype=np.int64)
        table = np.zeros((self.size, 1 << n), dtype=np.int32)
        for j in range(m):
            row = (index >> (m + n * (m - 1 - j))) & ((1 << n) - 1)
            offset = (index >> (m - 1 - j)) & 1
            for x in range(1 << n):
                bit = parity_array(row & x) ^ offset
                table[:, x] |= (bit << (m - 1 - j)).astype(np.int32)
        return table

    def __str__(self):
        return "H({}, {})".format(self.n, self.m)


def pairwise_violations(family: HashFamily, prefix: int = None,
                        cap: int = DEFAULT_FAMILY_CAP) -> List[tuple]:
    """
    Every pair x < x' whose joint output distribution over the whole family
    is not exactly uniform on pairs of (prefix-truncated) outputs.

    Returns:
        list - (x, x') pairs; empty when the family is pairwise independent.
    """
    width = family.m if prefix is None else prefix
    if not 0 <= width <= family.m:
        raise ValueError("prefix {} outside [0, {}]".format(width, family.m))
    table = family.evaluation_table(cap) >> (family.m - width)
    cells = 1 << (2 * width)
    expected = family.size // cells
    violations = []
    for x0, x1 in combinations(range(1 << family.n), 2):
        codes = (table[:, x0] << width) | table[:, x1]
        counts = np.bincount(codes, minlength=cells)
        if np.any(counts != expected):
            violations.append((x0, x1))
    logger.debug("Checked {} pairs of {} at prefix {}: {} violations"
                 .format((1 << family.n) * ((1 << family.n) - 1) // 2,
                         family, width, len(violations)))
    return violations


def is_pairwise_independent(family: HashFamily,
                            cap: int = DEFAULT_FAMILY_CAP) -> bool:
    return not pairwise_violations(family, cap=cap)


def is_hereditarily_universal(family: HashFamily,
                              cap: int = DEFAULT_FAMILY_CAP) -> bool:
    return all(not pairwise_violations(family, i, cap)
               for i in range(family.m + 1))
