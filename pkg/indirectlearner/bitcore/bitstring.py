from typing import Iterable, Iterator, Union
import numpy as np
from ..exceptions import OutOfRangeError
from ..utils import random_int


class BitString:
    """
    An immutable string of bits.

    The integer value of a string reads its bits most-significant first,
    so "011" has value 3 and bit 0 is the leftmost character.
    """

    __slots__ = ("_value", "_length")

    def __init__(self, value: int = 0, length: int = 0):
        if length < 0:
            raise ValueError("negative length: {}".format(length))
        if value < 0 or value >> length:
            raise ValueError("value {} does not fit in {} bits"
                             .format(value, length))
        self._value = value
        self._length = length

    @property
    def value(self) -> int:
        return self._value

    def to_int(self) -> int:
        return self._value

    @staticmethod
    def parse(bits: str) -> "BitString":
        bits = bits.strip()
        if bits and set(bits) - {"0", "1"}:
            raise ValueError("not a bit string: {!r}".format(bits))
        return BitString(int(bits, 2) if bits else 0, len(bits))

    @staticmethod
    def from_bits(bits: Iterable[int]) -> "BitString":
        value = 0
        length = 0
        for bit in bits:
            if bit not in (0, 1):
                raise ValueError("not a bit: {!r}".format(bit))
            value = (value << 1) | bit
            length += 1
        return BitString(value, length)

    @staticmethod
    def random(length: int, rng: np.random.Generator) -> "BitString":
        return BitString(random_int(rng, length), length)

    def concat(self, other: "BitString") -> "BitString":
        return BitString((self._value << other._length) | other._value,
                         self._length + other._length)

    def prefix(self, i: int) -> "BitString":
        """
        The first i bits.

        Raises:
            OutOfRangeError - i is larger than the length of the string.
        """
        if i < 0 or i > self._length:
            raise OutOfRangeError("prefix of length {} requested from a "
                                  "{}-bit string".format(i, self._length))
        return BitString(self._value >> (self._length - i), i)

    def slice(self, start: int, stop: int) -> "BitString":
        if not 0 <= start <= stop <= self._length:
            raise OutOfRangeError("slice [{}:{}] of a {}-bit string"
                                  .format(start, stop, self._length))
        width = stop - start
        value = (self._value >> (self._length - stop)) & ((1 << width) - 1)
        return BitString(value, width)

    def split(self, *widths: int) -> list:
        """
        Cut the string into consecutive blocks of the given widths.
        """
        if sum(widths) != self._length:
            raise ValueError("block widths {} do not cover {} bits"
                             .format(widths, self._length))
        blocks = []
        start = 0
        for width in widths:
            blocks.append(self.slice(start, start + width))
            start += width
        return blocks

    def bits(self) -> list:
        return [(self._value >> (self._length - 1 - i)) & 1
                for i in range(self._length)]

    def __add__(self, other: "BitString") -> "BitString":
        return self.concat(other)

    def __len__(self) -> int:
        return self._length

    def __getitem__(self, i: int) -> int:
        if i < 0:
            i += self._length
        if not 0 <= i < self._length:
            raise OutOfRangeError("bit {} of a {}-bit string"
                                  .format(i, self._length))
        return (self._value >> (self._length - 1 - i)) & 1

    def __iter__(self) -> Iterator[int]:
        return iter(self.bits())

    def __eq__(self, other):
        if not isinstance(other, BitString):
            return NotImplemented
        return self._value == other._value and self._length == other._length

    def __lt__(self, other: "BitString"):
        return (self._length, self._value) < (other._length, other._value)

    def __hash__(self):
        return hash((self._value, self._length))

    def __str__(self):
        if self._length == 0:
            return ""
        return format(self._value, "0{}b".format(self._length))

    def __repr__(self):
        return "BitString('{}')".format(self)


def bitstring(value: Union[str, BitString]) -> BitString:
    return value if isinstance(value, BitString) else BitString.parse(value)


def concat(a: BitString, b: BitString) -> BitString:
    return bitstring(a).concat(bitstring(b))


def prefix(a: BitString, i: int) -> BitString:
    return bitstring(a).prefix(i)


def all_bitstrings(length: int) -> Iterator[BitString]:
    for value in range(1 << length):
        yield BitString(value, length)
