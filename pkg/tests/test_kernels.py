import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from frobrel import kernels
from frobrel._accel import HAVE_NUMBA

needs_numba = pytest.mark.skipif(not HAVE_NUMBA, reason="numba not installed")


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 6), st.integers(0, 6), st.integers(0, 6), st.data())
def test_compose_backends_agree(n, k, m, data):
    a = data.draw(hnp.arrays(bool, (n, k)))
    b = data.draw(hnp.arrays(bool, (k, m)))
    want = np.array([[any(a[i, j] and b[j, c] for j in range(k)) for c in range(m)] for i in range(n)], dtype=bool)
    assert np.array_equal(kernels.compose_np(a, b), want.reshape(n, m))
    if HAVE_NUMBA:
        assert np.array_equal(kernels.compose_nb(a, b), want.reshape(n, m))


@needs_numba
def test_frob2_flags_backends_agree():
    codes = np.arange(1 << 10)
    M = kernels.unpack_codes(codes >> 2, (2, 2, 2))
    U = kernels.unpack_codes(codes & 3, (2,))
    assert np.array_equal(kernels.frob2_flags_np(M, U), kernels.frob2_flags_nb(M, U))
    rng = np.random.default_rng(0)
    M = rng.random((500, 3, 3, 3)) < 0.2
    U = rng.random((500, 3)) < 0.5
    assert np.array_equal(kernels.frob2_flags_np(M, U), kernels.frob2_flags_nb(M, U))


@needs_numba
def test_frob3_flags_backends_agree():
    L = kernels.unpack_codes(np.arange(1 << 16), (2, 2, 2, 2))
    assert np.array_equal(kernels.frob3_flags_np(L), kernels.frob3_flags_nb(L))
    rng = np.random.default_rng(1)
    L = rng.random((300, 3, 3, 3, 3)) < 0.1
    assert np.array_equal(kernels.frob3_flags_np(L), kernels.frob3_flags_nb(L))


@needs_numba
def test_clique_cover_backends_agree():
    rng = np.random.default_rng(2)
    for _ in range(50):
        masks = rng.integers(1, 1 << 9, size=8).astype(np.int64)
        pick = rng.random(8) < 0.4
        target = np.int64(np.bitwise_or.reduce(masks[pick]) if pick.any() else 0)
        for cap in (1, 3, 8):
            assert kernels.clique_cover_np(masks, target, cap) == kernels.clique_cover_nb(masks, target, cap)


def test_pack_unpack():
    a = kernels.unpack_codes([5, 0, 15], (2, 2))
    assert a[0].tolist() == [[True, False], [True, False]]
    assert [kernels.pack_array(x) for x in a] == [5, 0, 15]


def test_numba_can_be_disabled():
    code = "from frobrel import kernels, _accel; print(kernels.BACKEND, _accel.USE_NUMBA)"
    env = dict(os.environ, FROBREL_NO_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["numpy", "False"]
    env["FROBREL_NO_NUMBA"] = "0"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split()[0] == ("numba" if HAVE_NUMBA else "numpy")


def test_numpy_backend_counts():
    # the frozen size-2 ternary counts, recomputed without numba
    code = (
        "import numpy as np\n"
        "from frobrel import kernels\n"
        "L = kernels.unpack_codes(np.arange(1 << 16), (2, 2, 2, 2))\n"
        "print(*kernels.frob3_flags(L).sum(axis=0))\n"
    )
    env = dict(os.environ, FROBREL_NO_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert [int(x) for x in out.stdout.split()] == [256, 128, 400, 2360, 2360, 4096]
