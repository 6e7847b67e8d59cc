from .bitcore import BitString, QueryOracle, TruthTable, builtin_function
from .distributions import (DyadicProb, ExactDistribution,
                            ProductDistribution, prod_samp, samp)
from .inverters import (BitInverter, ProductInverter, bit_inv, prod_inv,
                        InversionOutcome, FAIL)
from .learners import brute_force_learn, low_degree_learn
from .reduction import evaluate, learn_over_mu
from .configmanager import ConfigManager, ExperimentConfig, load_config
from .experimentrunner import ExperimentRunner
from .report import RunReport
from .exceptions import (ValidationError, ConfigurationError, SizeError,
                         CoinLengthError, RequestError)
