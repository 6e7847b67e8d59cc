from typing import Callable, Dict, List, Optional, Sequence, Set
import logging
import re
import threading
import numpy as np
from ..exceptions import SizeError, ValidationError
from ..utils import random_int
from .bitstring import BitString, bitstring


logger = logging.getLogger(__name__)

DEFAULT_MAX_ARITY = 24


def check_arity(arity: int, cap: int, what: str = "truth table"):
    if arity > cap:
        raise SizeError("{} arity {} exceeds the enumeration cap of {} bits"
                        .format(what, arity, cap))


class BooleanMap:
    """
    A total function {0,1}^arity -> {0,1}^out_len.

    Subclasses only have to evaluate single inputs. Inversion falls back to
    a scan of the whole domain, which is bounded by the enumeration cap.
    Maps with structure (direct products, truncating hashes) override the
    preimage methods and can be inverted far beyond the cap.
    """

    cap = DEFAULT_MAX_ARITY

    @property
    def arity(self) -> int:
        raise NotImplementedError

    @property
    def out_len(self) -> int:
        raise NotImplementedError

    def evaluate_int(self, u: int) -> int:
        raise NotImplementedError

    def __call__(self, x: BitString) -> BitString:
        x = bitstring(x)
        if len(x) != self.arity:
            raise ValueError("{}-bit input given to a map of arity {}"
                             .format(len(x), self.arity))
        return BitString(self.evaluate_int(x.value), self.out_len)

    def preimage_ints(self, y: int) -> List[int]:
        check_arity(self.arity, self.cap, "preimage scan")
        return [u for u in range(1 << self.arity)
                if self.evaluate_int(u) == y]

    def count_preimages(self, y: BitString) -> int:
        return len(self.preimage_ints(bitstring(y).value))

    def random_preimage(self, y: BitString,
                        rng: np.random.Generator) -> Optional[BitString]:
        """
        A uniformly random preimage of y, or None when y has none.
        """
        candidates = self.preimage_ints(bitstring(y).value)
        if not candidates:
            return None
        u = candidates[int(rng.integers(0, len(candidates)))]
        return BitString(u, self.arity)

    def random_input(self, rng: np.random.Generator) -> BitString:
        return BitString(random_int(rng, self.arity), self.arity)

    def to_truth_table(self, cap: int = None) -> "TruthTable":
        cap = self.cap if cap is None else cap
        check_arity(self.arity, cap)
        return TruthTable(self.arity, self.out_len,
                          [self.evaluate_int(u)
                           for u in range(1 << self.arity)],
                          max_arity=cap)


class TruthTable(BooleanMap):
    """
    A function given by its full table of outputs, indexed by the integer
    value of the input.
    """

    def __init__(self, arity: int, out_len: int, outputs: Sequence[int],
                 max_arity: int = DEFAULT_MAX_ARITY):
        check_arity(arity, max_arity)
        if len(outputs) != 1 << arity:
            raise ValueError("a table of arity {} needs {} outputs, got {}"
                             .format(arity, 1 << arity, len(outputs)))
        limit = 1 << out_len
        outputs = tuple(int(y) for y in outputs)
        for y in outputs:
            if not 0 <= y < limit:
                raise ValueError("output {} does not fit in {} bits"
                                 .format(y, out_len))
        self._arity = arity
        self._out_len = out_len
        self._outputs = outputs
        self._index = None
        self._lock = threading.Lock()
        self.cap = max_arity

    @staticmethod
    def from_function(arity: int, out_len: int, function: Callable[[int], int],
                      max_arity: int = DEFAULT_MAX_ARITY) -> "TruthTable":
        check_arity(arity, max_arity)
        return TruthTable(arity, out_len,
                          [function(u) for u in range(1 << arity)],
                          max_arity=max_arity)

    @staticmethod
    def from_strings(rows: Sequence[str]) -> "TruthTable":
        """
        Build a table from its rows written as bit strings, e.g.
        ["0", "0", "0", "1"] for 2-bit AND.
        """
        rows = [bitstring(row) for row in rows]
        arity = max(len(rows) - 1, 0).bit_length()
        out_len = len(rows[0]) if rows else 0
        if any(len(row) != out_len for row in rows):
            raise ValueError("rows of a truth table must share one length")
        return TruthTable(arity, out_len, [row.value for row in rows])

    @property
    def arity(self) -> int:
        return self._arity

    @property
    def out_len(self) -> int:
        return self._out_len

    @property
    def outputs(self) -> tuple:
        return self._outputs

    def evaluate_int(self, u: int) -> int:
        return self._outputs[u]

    def _inverse_index(self) -> Dict[int, List[int]]:
        if self._index is None:
            with self._lock:
                if self._index is None:
                    index = {}
                    for u, y in enumerate(self._outputs):
                        index.setdefault(y, []).append(u)
                    self._index = index
        return self._index

    def preimage_ints(self, y: int) -> List[int]:
        return self._inverse_index().get(y, [])

    def preimages(self, y: BitString) -> Set[BitString]:
        y = bitstring(y)
        if len(y) != self._out_len:
            raise ValueError("{}-bit image given to a table with {}-bit "
                             "outputs".format(len(y), self._out_len))
        return {BitString(u, self._arity) for u in self.preimage_ints(y.value)}

    def image(self) -> List[int]:
        return sorted(self._inverse_index())

    def serialize(self) -> str:
        """
        Hex row format: a header line "n=<arity> out=<out_len>" followed by
        all outputs concatenated in input order, hex encoded, zero padded on
        the right to a whole number of hex digits.
        """
        total = (1 << self._arity) * self._out_len
        value = 0
        for y in self._outputs:
            value = (value << self._out_len) | y
        digits = (total + 3) // 4
        value <<= digits * 4 - total
        body = format(value, "0{}x".format(digits)) if digits else ""
        return "n={} out={}\n{}\n".format(self._arity, self._out_len, body)

    @staticmethod
    def parse(text: str, max_arity: int = DEFAULT_MAX_ARITY) -> "TruthTable":
        """
        Parse the hex row format written by serialize().

        Raises:
            ValidationError - The text is not a well formed table.
            SizeError - The arity exceeds max_arity.
        """
        lines = [line.strip() for line in text.strip().splitlines()]
        if not lines:
            raise ValidationError("empty truth table")
        header = re.match(r"^n\s*=\s*(\d+)\s+out\s*=\s*(\d+)$", lines[0])
        if not header:
            raise ValidationError("bad truth table header: {!r}"
                                  .format(lines[0]))
        arity, out_len = int(header.group(1)), int(header.group(2))
        check_arity(arity, max_arity)
        body = "".join(lines[1:])
        total = (1 << arity) * out_len
        digits = (total + 3) // 4
        if len(body) != digits:
            raise ValidationError("expected {} hex digits, got {}"
                                  .format(digits, len(body)))
        try:
            value = int(body, 16) if body else 0
        except ValueError as e:
            raise ValidationError(e) from e
        padding = digits * 4 - total
        if value & ((1 << padding) - 1):
            raise ValidationError("nonzero padding bits in truth table")
        value >>= padding
        mask = (1 << out_len) - 1
        count = 1 << arity
        outputs = [(value >> (out_len * (count - 1 - u))) & mask
                   for u in range(count)]
        return TruthTable(arity, out_len, outputs, max_arity=max_arity)

    def __eq__(self, other):
        if not isinstance(other, TruthTable):
            return NotImplemented
        return (self._arity, self._out_len, self._outputs) == \
            (other._arity, other._out_len, other._outputs)

    def __hash__(self):
        return hash((self._arity, self._out_len, self._outputs))

    def __str__(self):
        return "TruthTable(n={}, out={})".format(self._arity, self._out_len)


def tt_from_oracle(oracle: Callable[[BitString], BitString], n: int,
                   max_arity: int = DEFAULT_MAX_ARITY) -> TruthTable:
    """
    Tabulate an oracle by querying every n-bit input once, in order.

    Single-bit integer answers are read as 1-bit outputs.
    """
    check_arity(n, max_arity)
    outputs = []
    out_len = None
    for u in range(1 << n):
        answer = oracle(BitString(u, n))
        if isinstance(answer, BitString):
            width, y = len(answer), answer.value
        else:
            width, y = 1, int(answer)
        if out_len is None:
            out_len = width
        elif width != out_len:
            raise ValueError("oracle answers have different lengths")
        outputs.append(y)
    logger.debug("Tabulated oracle on {} inputs".format(1 << n))
    return TruthTable(n, out_len, outputs, max_arity=max_arity)


def preimages(f: TruthTable, y: BitString) -> Set[BitString]:
    return f.preimages(y)
