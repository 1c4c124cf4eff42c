from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from clustercut.errors import InputError
from clustercut.matmul import Kernel, OpCounter, matmul, pack_rows

ALL = list(Kernel)


@pytest.mark.parametrize("kernel", [Kernel.NAIVE, Kernel.STRASSEN])
def test_two_by_two(kernel):
    out = matmul([[1, 2], [3, 4]], [[5, 6], [7, 8]], kernel, crossover=1)
    assert out.tolist() == [[19, 22], [43, 50]]


@pytest.mark.parametrize("kernel", ALL)
def test_identity(kernel):
    a = np.random.default_rng(0).integers(0, 2, size=(9, 9))
    assert np.array_equal(matmul(np.eye(9, dtype=np.int64), a, kernel), a)


def test_all_kernels_agree_on_boolean_128():
    rng = np.random.default_rng(1)
    a = rng.integers(0, 2, size=(128, 128))
    b = rng.integers(0, 2, size=(128, 128))
    naive = matmul(a, b, Kernel.NAIVE)
    assert np.array_equal(matmul(a, b, Kernel.STRASSEN, crossover=16), naive)
    assert np.array_equal(matmul(a, b, Kernel.BITPACKED), (naive > 0).astype(np.int64))


@given(st.integers(1, 40), st.integers(1, 40), st.integers(1, 40), st.integers(1, 8), st.integers(0, 2**32))
@settings(max_examples=60, deadline=None)
def test_strassen_rectangular(p, q, r, crossover, seed):
    rng = np.random.default_rng(seed)
    a = rng.integers(-50, 51, size=(p, q))
    b = rng.integers(-50, 51, size=(q, r))
    assert np.array_equal(matmul(a, b, Kernel.STRASSEN, crossover=crossover), a @ b)


def test_big_entries_fall_back_to_python_ints():
    a = np.array([[2**40, 1], [3, 2**40]], dtype=object)
    expected = [[2**80 + 3, 2**40 + 2**40], [3 * 2**40 + 3 * 2**40, 3 + 2**80]]
    for kernel in (Kernel.NAIVE, Kernel.STRASSEN):
        assert matmul(a, a, kernel, crossover=1).tolist() == expected


def test_op_counts():
    ones = np.ones((8, 8), dtype=np.int64)
    c = OpCounter(keep_log=True)
    matmul(ones, ones, Kernel.NAIVE, c)
    assert c.mults == 512 and c.calls == 1 and c.log == [(8, 8, 8, 512)]
    c = OpCounter()
    matmul(ones, ones, Kernel.STRASSEN, c, crossover=1)
    assert c.mults == 7**3
    c = OpCounter()
    matmul(np.ones((8, 70), dtype=np.int64), np.ones((70, 5), dtype=np.int64), Kernel.BITPACKED, c)
    assert c.word_ops == 8 * 5 * 2


def test_pack_rows_layout():
    x = np.zeros((1, 65), dtype=np.int64)
    x[0, 0] = x[0, 64] = 1
    words = pack_rows(x)
    assert words.shape == (1, 2)
    assert words.tolist() == [[1, 1]]


def test_input_validation():
    with pytest.raises(InputError):
        matmul(np.ones((2, 3)), np.ones((2, 3)))
    with pytest.raises(InputError):
        matmul(np.ones((2, 2), dtype=float), np.ones((2, 2), dtype=float))
    with pytest.raises(InputError):
        matmul([[2]], [[1]], Kernel.BITPACKED)
