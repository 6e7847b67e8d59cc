from typing import Callable, Union
import threading
from .bitstring import BitString, bitstring
from .truthtable import BooleanMap


class QueryOracle:
    """
    Membership-query access to a function, counting every call.

    The counter is updated under a lock, so concurrent learners get exact
    query counts.
    """

    def __init__(self, function: Union[Callable[[BitString], BitString],
                                       BooleanMap],
                 arity: int, name: str = None):
        self._function = function
        self.arity = arity
        self.name = name or getattr(function, "__name__", "oracle")
        self._queries = 0
        self._lock = threading.Lock()

    @staticmethod
    def from_map(function: BooleanMap, name: str = None) -> "QueryOracle":
        return QueryOracle(function, function.arity, name=name)

    @property
    def queries(self) -> int:
        return self._queries

    def query(self, x: BitString) -> BitString:
        x = bitstring(x)
        if len(x) != self.arity:
            raise ValueError("{}-bit query to an oracle of arity {}"
                             .format(len(x), self.arity))
        with self._lock:
            self._queries += 1
        answer = self._function(x)
        if not isinstance(answer, BitString):
            answer = BitString(int(answer), 1)
        return answer

    def query_bit(self, x: BitString) -> int:
        answer = self.query(x)
        if len(answer) != 1:
            raise ValueError("oracle {} is not Boolean".format(self.name))
        return answer.value

    def __call__(self, x: BitString) -> BitString:
        return self.query(x)

    def __str__(self):
        return self.name
