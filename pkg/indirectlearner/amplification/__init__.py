from .hashfamily import (HashFamily, HashFunction, is_hereditarily_universal,
                         is_pairwise_independent, pairwise_violations)
from .oracles import (BruteForceInverterOracle, FailingInverterOracle,
                      InverterOracle, RestrictedInverterOracle,
                      brute_force_distribution, brute_force_invert)
from .directproduct import (AmplifiedInverter, DirectProduct,
                            amplification_repetitions, direct_product,
                            weak_to_strong)
from .truncatinghash import (HashingInverter, TruncatingHash,
                             hash_output_length, strong_to_distributional,
                             truncating_hash)
from .chain import (chain_distributional_inverter, direct_product_copies,
                    truncation_parameter)
