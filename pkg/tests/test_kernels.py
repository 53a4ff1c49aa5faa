import os
import subprocess
import sys

import numpy as np
import pytest

from corpus import kronecker_band, loop_tree, tree_corpus, two_loop_band
from qgrass import _kernels
from qgrass.errors import EnumerationBudgetExceeded
from qgrass.euler import band_table, euler_flag_tree, tree_table
from qgrass.subsets import closed_masks, reach_masks

needs_numba = pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not installed")


def both(fn):
    with _kernels.using_backend("numpy"):
        a = fn()
    with _kernels.using_backend("numba"):
        b = fn()
    return a, b


@needs_numba
def test_closed_subsets_parity():
    for F in tree_corpus(count=16) + [two_loop_band()]:
        a, b = both(lambda: closed_masks(F))
        assert a == b
        a, b = both(lambda: closed_masks(F, tuple(x // 2 for x in F.fiber_sizes)))
        assert a == b


@needs_numba
def test_convolution_parity():
    rng = np.random.default_rng(3)
    for shape in [(5,), (3, 4), (2, 3, 4)]:
        x = rng.integers(0, 9, size=shape)
        y = rng.integers(0, 9, size=shape)
        a, b = both(lambda: _kernels.convolve(x, y))
        assert np.array_equal(a, b)


@needs_numba
def test_tables_and_chains_parity():
    F = loop_tree()
    a, b = both(lambda: tree_table(F, tuple(s + 1 for s in F.fiber_sizes)))
    assert np.array_equal(a, b)
    B = kronecker_band()
    a, b = both(lambda: band_table(B, 3, (4, 4)))
    assert np.array_equal(a, b)
    dims = [(1, 0, 0), (1, 1, 1), (2, 1, 2)]
    a, b = both(lambda: euler_flag_tree(F, dims))
    assert a == b


def test_brute_force_convolution():
    x = np.array([[1, 2], [3, 4]])
    y = np.array([[5, 0], [1, 1]])
    want = np.zeros((2, 2), dtype=np.int64)
    for i, j, k, l in np.ndindex(2, 2, 2, 2):
        if i + k < 2 and j + l < 2:
            want[i + k, j + l] += x[i, j] * y[k, l]
    for name in ("numpy",) + (("numba",) if _kernels.HAVE_NUMBA else ()):
        with _kernels.using_backend(name):
            assert np.array_equal(_kernels.convolve(x, y), want)


def test_big_values_stay_exact():
    x = np.array([2**40, 0, 1], dtype=object)
    out = _kernels.convolve(x, x)
    assert out[0] == 2**80 and out[2] == 2**41


def test_wide_masks_use_object_path():
    # a directed path with 70 vertices exceeds int64 bitmasks
    n = 70
    closure = [sum(1 << j for j in range(i, n)) for i in range(n)]
    masks = _kernels.closed_subsets(closure, [0] * n, [n], False)
    assert len(masks) == n + 1
    assert _kernels.chain_step([0, 1 << 69], [1, 2], [(1 << 70) - 1], n) == [3]


def test_budget():
    F = loop_tree()
    closure = reach_masks(F.domain)
    with pytest.raises(EnumerationBudgetExceeded):
        _kernels.closed_subsets(closure, F.vlabel, F.fiber_sizes, False, max_states=1)


def test_env_flag_selects_numpy():
    env = dict(os.environ, QG_NO_NUMBA="1")
    res = subprocess.run([sys.executable, "-c", "from qgrass import _kernels; print(_kernels.backend())"],
                         env=env, capture_output=True, text=True, check=True)
    assert res.stdout.strip() == "numpy"


def test_unknown_backend():
    with pytest.raises(ValueError):
        _kernels.set_backend("fortran")
