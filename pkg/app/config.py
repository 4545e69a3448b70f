"""Application constants and configuration."""
import os

# Randomized rank (evaluation over a prime field)
MODULUS = (1 << 61) - 1  # Mersenne prime 2^61 - 1
DEFAULT_TRIALS = 3
DEFAULT_SEED = 0
RANK_WORKERS = 1  # thread pool size for randomized trials

# Exact rank (fraction-free elimination over ZZ[E_ij])
EXACT_MAX_COEFF_BITS = 4096

# Enumeration and sweeps
MAX_ENUMERATION_N = int(os.environ.get('POSETINDEX_MAX_N', 7))
BRUTE_FORCE_MAX_N = 5  # naive 2^(n(n-1)/2) filtering oracle
EXACT_SPOT_CHECK_RATE = 0.01
SWEEP_WORKERS = 1

# Height reduction
MAX_REDUCTION_STEPS = 10_000

# Modular kernel
DISABLE_NUMBA = os.environ.get('POSETINDEX_DISABLE_NUMBA', '0') == '1'

# HTTP limits
MAX_API_POSET_SIZE = 12
MAX_API_SWEEP_N = 5
MAX_REQUEST_SIZE_KB = 256

VARIANTS = ('nilpotent', 'solvable')
METHODS = ('exact', 'randomized')
ORDERINGS = ('lex', 'block')
