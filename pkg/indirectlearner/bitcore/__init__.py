from .bitstring import BitString, bitstring, concat, prefix, all_bitstrings
from .truthtable import (BooleanMap, TruthTable, DEFAULT_MAX_ARITY,
                         check_arity, tt_from_oracle, preimages)
from .oracle import QueryOracle
from .builtins import (BOOLEAN_FUNCTIONS, builtin_function,
                       identity_function, not_function, random_function,
                       two_to_one_function)
