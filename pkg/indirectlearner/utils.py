from fractions import Fraction
from typing import Optional, Union
import hashlib
import math
import re
import numpy as np


_RATIONAL_RE = re.compile(r"^\s*(\d+)\s*/\s*(?:2\s*\^\s*(\d+)|(\d+))\s*$")


def parse_rational(value: Union[str, int, float, Fraction]) -> Fraction:
    """
    Parse "a/b", "s/2^k", an integer or a decimal literal into a Fraction.

    Raises:
        ValueError - The value is not a rational literal.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError("not a rational: {!r}".format(value))
    if isinstance(value, (int, float)):
        return Fraction(str(value)) if isinstance(value, float) \
            else Fraction(value)
    match = _RATIONAL_RE.match(value)
    if match:
        numerator = int(match.group(1))
        if match.group(2) is not None:
            denominator = 1 << int(match.group(2))
        else:
            denominator = int(match.group(3))
        if denominator == 0:
            raise ValueError("zero denominator: {!r}".format(value))
        return Fraction(numerator, denominator)
    try:
        return Fraction(value.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError("not a rational: {!r}".format(value)) from e


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return "{}/{}".format(value.numerator, value.denominator)


def ceil_log2(x: Union[int, Fraction]) -> int:
    """
    Smallest integer e >= 0 with 2^e >= x (logs are base 2, rounded up).
    """
    x = Fraction(x)
    if x <= 1:
        return 0
    e = 0
    while (1 << e) < x:
        e += 1
    return e


def rounds_for(gamma: Fraction) -> int:
    """
    Number of rejection rounds needed for failure probability gamma.
    """
    gamma = Fraction(gamma)
    if not 0 < gamma < 1:
        raise ValueError("gamma must lie in (0, 1), got {}".format(gamma))
    return ceil_log2(1 / gamma)


def _stream_key(name: str) -> int:
    digest = hashlib.sha256(name.encode("utf-8")).digest()
    return int.from_bytes(digest[:4], "big")


def substream(seed: int, name: str,
              index: Optional[int] = None) -> np.random.Generator:
    """
    A generator for the named substream of a run seed.

    The same (seed, name, index) always yields the same stream, and
    different names never share one.
    """
    spawn_key = (_stream_key(name),) if index is None \
        else (_stream_key(name), index)
    return np.random.default_rng(
        np.random.SeedSequence(seed, spawn_key=spawn_key))


def random_int(rng: np.random.Generator, nbits: int) -> int:
    """
    A uniformly random integer of nbits bits.
    """
    value = 0
    remaining = nbits
    while remaining > 0:
        chunk = min(remaining, 32)
        value = (value << chunk) | int(rng.integers(0, 1 << chunk))
        remaining -= chunk
    return value


def binomial_margin(delta: float, runs: int, sigmas: float = 3.0) -> float:
    return sigmas * math.sqrt(delta * (1 - delta) / runs)


def parity_array(values: np.ndarray) -> np.ndarray:
    """
    Elementwise parity of nonnegative int64 values.
    """
    values = values.astype(np.int64, copy=True)
    for shift in (32, 16, 8, 4, 2, 1):
        values ^= values >> shift
    return values & 1


def parity(value: int) -> int:
    return bin(value).count("1") & 1
