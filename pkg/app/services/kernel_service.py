"""Modular elimination kernel over the Mersenne prime 2^61 - 1.

Products of two residues need 122 bits, so the compiled kernel splits
operands into 31/30-bit halves and folds with 2^61 = 1 (mod p), staying
inside uint64.
"""
import logging
import threading

import numpy as np

from app.config import DISABLE_NUMBA, MODULUS

try:
    from numba import njit
    NUMBA_AVAILABLE = True
except ImportError:
    NUMBA_AVAILABLE = False

logger = logging.getLogger(__name__)

_P = np.uint64(MODULUS)
_ZERO = np.uint64(0)
_ONE = np.uint64(1)
_TWO = np.uint64(2)
_MASK31 = np.uint64((1 << 31) - 1)
_MASK30 = np.uint64((1 << 30) - 1)
_S30 = np.uint64(30)
_S31 = np.uint64(31)
_S61 = np.uint64(61)


def _jit(fn):
    if NUMBA_AVAILABLE:
        return njit(cache=True, nogil=True)(fn)
    return fn


@_jit
def _mulmod(a, b):
    a_hi = a >> _S31
    a_lo = a & _MASK31
    b_hi = b >> _S31
    b_lo = b & _MASK31
    mid = a_hi * b_lo + a_lo * b_hi
    r = _TWO * a_hi * b_hi + (mid >> _S30) + ((mid & _MASK30) << _S31) + a_lo * b_lo
    r = (r & _P) + (r >> _S61)
    if r >= _P:
        r -= _P
    return r


@_jit
def _submod(a, b):
    r = a + (_P - b)
    if r >= _P:
        r -= _P
    return r


@_jit
def _powmod(a, e):
    result = _ONE
    while e > _ZERO:
        if (e & _ONE) == _ONE:
            result = _mulmod(result, a)
        a = _mulmod(a, a)
        e = e >> _ONE
    return result


@_jit
def _rank_mod_p(mat):
    m = mat.copy()
    rows, cols = m.shape
    rank = 0
    for c in range(cols):
        if rank == rows:
            break
        pivot = -1
        for r in range(rank, rows):
            if m[r, c] != _ZERO:
                pivot = r
                break
        if pivot < 0:
            continue
        if pivot != rank:
            for j in range(cols):
                tmp = m[rank, j]
                m[rank, j] = m[pivot, j]
                m[pivot, j] = tmp
        inv = _powmod(m[rank, c], _P - _TWO)
        for r in range(rank + 1, rows):
            if m[r, c] != _ZERO:
                f = _mulmod(m[r, c], inv)
                for j in range(c, cols):
                    if m[rank, j] != _ZERO:
                        m[r, j] = _submod(m[r, j], _mulmod(f, m[rank, j]))
        rank += 1
    return rank


def rank_mod_p_python(rows: list) -> int:
    """Reference kernel on plain Python ints (list of int rows)."""
    m = [[x % MODULUS for x in row] for row in rows]
    n_rows = len(m)
    n_cols = len(m[0]) if m else 0
    rank = 0
    for c in range(n_cols):
        if rank == n_rows:
            break
        pivot = next((r for r in range(rank, n_rows) if m[r][c]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = pow(m[rank][c], -1, MODULUS)
        for r in range(rank + 1, n_rows):
            if m[r][c]:
                f = m[r][c] * inv % MODULUS
                for j in range(c, n_cols):
                    m[r][j] = (m[r][j] - f * m[rank][j]) % MODULUS
        rank += 1
    return rank


class ModularKernelService:
    _instance = None
    _lock = threading.Lock()

    def __new__(cls):
        if cls._instance is None:
            with cls._lock:
                if cls._instance is None:
                    cls._instance = super().__new__(cls)
                    cls._instance._initialized = False
        return cls._instance

    def __init__(self):
        if self._initialized:
            return
        self._kernel_lock = threading.Lock()
        self._kernel_loaded = False
        self.use_numba = NUMBA_AVAILABLE and not DISABLE_NUMBA
        self._initialized = True

    def load_kernel(self):
        """Compile the numba kernel with a warm-up call."""
        if self._kernel_loaded:
            return

        with self._kernel_lock:
            if self._kernel_loaded:
                return

            if self.use_numba:
                logger.info("Compiling modular rank kernel (mod 2^61 - 1)...")
                warmup = np.array([[1, 2], [3, 4]], dtype=np.uint64)
                if _rank_mod_p(warmup) != 2:
                    raise RuntimeError("modular rank kernel failed its warm-up check")
                logger.info("Modular rank kernel ready.")
            else:
                logger.info("numba unavailable or disabled, using the pure-Python modular kernel")
            self._kernel_loaded = True

    def rank(self, mat: np.ndarray) -> int:
        """Rank over GF(2^61 - 1) of a uint64 matrix with reduced entries."""
        if mat.size == 0:
            return 0
        self.load_kernel()
        if self.use_numba:
            return int(_rank_mod_p(np.ascontiguousarray(mat, dtype=np.uint64)))
        return rank_mod_p_python(mat.tolist())

    def status(self) -> dict:
        return {
            'backend': 'numba' if self.use_numba else 'python',
            'numba_available': NUMBA_AVAILABLE,
            'loaded': self._kernel_loaded,
            'modulus': str(MODULUS),
        }


kernel_service = ModularKernelService()
