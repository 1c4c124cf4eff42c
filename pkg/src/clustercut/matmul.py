"""Exact matrix-multiplication kernels with operation accounting.

``NAIVE`` is the schoolbook product, ``STRASSEN`` the seven-product
recursion over integers (padding to a power of two, falling back to the
schoolbook product at or below ``crossover``), and ``BITPACKED`` the boolean
product over 64-bit words.  Nothing here touches floating point.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError

_INT64_SAFE = 2**62
DEFAULT_CROSSOVER = 64


class Kernel(str, enum.Enum):
    NAIVE = "naive"
    STRASSEN = "strassen"
    BITPACKED = "bitpacked"


@dataclass
class OpCounter:
    """Counts scalar multiplications (integer kernels) or word ANDs (bit-packed)."""

    calls: int = 0
    mults: int = 0
    word_ops: int = 0
    log: list[tuple[int, int, int, int]] = field(default_factory=list)
    keep_log: bool = False

    @property
    def ops(self) -> int:
        return self.mults + self.word_ops

    def record(self, p: int, q: int, r: int, ops: int) -> None:
        self.calls += 1
        if self.keep_log:
            self.log.append((p, q, r, ops))

    def as_dict(self) -> dict[str, int]:
        return {"mm_calls": self.calls, "mm_mults": self.mults, "mm_word_ops": self.word_ops}


def _as_int_matrix(x) -> np.ndarray:
    arr = np.asarray(x)
    if arr.ndim != 2:
        raise InputError("matrices must be two-dimensional")
    if arr.dtype == bool:
        return arr.astype(np.int64)
    if arr.dtype == object or np.issubdtype(arr.dtype, np.integer):
        return arr
    raise InputError(f"integer matrices required, got dtype {arr.dtype}")


def _max_abs(x: np.ndarray) -> int:
    return int(np.abs(x).max()) if x.size else 0


def _naive(a: np.ndarray, b: np.ndarray, counter: OpCounter | None) -> np.ndarray:
    p, q = a.shape
    r = b.shape[1]
    if counter is not None:
        counter.mults += p * q * r
    if a.dtype != object and b.dtype != object and _max_abs(a) * _max_abs(b) * max(q, 1) < _INT64_SAFE:
        return a.astype(np.int64) @ b.astype(np.int64)
    return a.astype(object) @ b.astype(object)


def _strassen_square(a: np.ndarray, b: np.ndarray, crossover: int, counter: OpCounter | None):
    n = a.shape[0]
    if n <= max(crossover, 1):
        return _naive(a, b, counter)
    h = n // 2
    a11, a12, a21, a22 = a[:h, :h], a[:h, h:], a[h:, :h], a[h:, h:]
    b11, b12, b21, b22 = b[:h, :h], b[:h, h:], b[h:, :h], b[h:, h:]
    rec = lambda x, y: _strassen_square(x, y, crossover, counter)  # noqa: E731
    m1 = rec(a11 + a22, b11 + b22)
    m2 = rec(a21 + a22, b11)
    m3 = rec(a11, b12 - b22)
    m4 = rec(a22, b21 - b11)
    m5 = rec(a11 + a12, b22)
    m6 = rec(a21 - a11, b11 + b12)
    m7 = rec(a12 - a22, b21 + b22)
    ms = (m1, m2, m3, m4, m5, m6, m7)
    out = np.empty((n, n), dtype=object if any(m.dtype == object for m in ms) else np.int64)
    out[:h, :h] = m1 + m4 - m5 + m7
    out[:h, h:] = m3 + m5
    out[h:, :h] = m2 + m4
    out[h:, h:] = m1 - m2 + m3 + m6
    return out


def _strassen(a: np.ndarray, b: np.ndarray, crossover: int, counter: OpCounter | None):
    p, q = a.shape
    r = b.shape[1]
    size = max(p, q, r, 1)
    if size <= max(crossover, 1):
        return _naive(a, b, counter)
    n = 1
    while n < size:
        n *= 2
    levels = (n // max(crossover, 1)).bit_length()
    # operand entries grow by at most 2x per recursion level
    growth = 4**levels
    dtype = object if (a.dtype == object or b.dtype == object
                       or _max_abs(a) * _max_abs(b) * n * growth >= _INT64_SAFE) else np.int64
    pa = np.zeros((n, n), dtype=dtype)
    pb = np.zeros((n, n), dtype=dtype)
    pa[:p, :q] = a
    pb[:q, :r] = b
    return _strassen_square(pa, pb, crossover, counter)[:p, :r]


def pack_rows(x: np.ndarray) -> np.ndarray:
    """Pack each row of a 0/1 matrix into little-endian uint64 words."""
    rows, cols = x.shape
    nbytes = -(-max(cols, 1) // 64) * 8
    packed = np.packbits(x.astype(bool), axis=1, bitorder="little")
    buf = np.zeros((rows, nbytes), dtype=np.uint8)
    buf[:, :packed.shape[1]] = packed
    return buf.view(np.uint64)


def bool_product_packed(a_words: np.ndarray, bt_words: np.ndarray) -> np.ndarray:
    """Boolean product from row-packed ``A`` and row-packed ``B^T``."""
    return np.bitwise_and(a_words[:, None, :], bt_words[None, :, :]).any(axis=2)


def matmul(a, b, kernel: Kernel | str = Kernel.NAIVE, counter: OpCounter | None = None,
           crossover: int = DEFAULT_CROSSOVER) -> np.ndarray:
    """Exact product ``a @ b``.

    For ``BITPACKED`` the operands must be 0/1 and the result is the boolean
    (OR-of-ANDs) product as a 0/1 int64 matrix.
    """
    kernel = Kernel(kernel)
    a = _as_int_matrix(a)
    b = _as_int_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise InputError(f"dimension mismatch: {a.shape} @ {b.shape}")
    p, q = a.shape
    r = b.shape[1]
    before = counter.ops if counter is not None else 0
    if kernel is Kernel.NAIVE:
        out = _naive(a, b, counter)
    elif kernel is Kernel.STRASSEN:
        out = _strassen(a, b, crossover, counter)
    else:
        for m in (a, b):
            if m.size and not np.isin(m, (0, 1)).all():
                raise InputError("the bit-packed kernel needs 0/1 matrices")
        aw = pack_rows(a)
        bw = pack_rows(b.T)
        if counter is not None:
            counter.word_ops += p * r * aw.shape[1]
        out = bool_product_packed(aw, bw).astype(np.int64)
    if counter is not None:
        counter.record(p, q, r, counter.ops - before)
    return out
