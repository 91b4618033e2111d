import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dihedra import _kernels
from dihedra.cyclo import _power_table

needs_numba = pytest.mark.skipif(_kernels.numba_impl is None, reason="numba not importable")


@needs_numba
@given(st.integers(2, 30), st.integers(2, 30), st.integers(2, 30))
def test_box_kernels_agree(a1, a2, a3):
    nb = _kernels.numba_impl.reduced_solutions(a1, a2, a3)
    nu = _kernels.numpy_impl.reduced_solutions(a1, a2, a3)
    assert sorted(map(tuple, nb.tolist())) == sorted(map(tuple, nu.tolist()))
    assert _kernels.numba_impl.reduced_count(a1, a2, a3) == len(nu)


@needs_numba
def test_cube_kernels_agree():
    assert np.array_equal(
        _kernels.numba_impl.reduced_count_cube(14), _kernels.numpy_impl.reduced_count_cube(14)
    )


@needs_numba
@given(st.sampled_from([5, 12, 30, 60, 105]), st.data())
def test_polymulmod_kernels_agree(level, data):
    table, _ = _power_table(level)
    d = table.shape[1]
    vec = st.lists(st.integers(-50, 50), min_size=d, max_size=d)
    a = np.array(data.draw(vec), dtype=np.int64)
    b = np.array(data.draw(vec), dtype=np.int64)
    assert np.array_equal(
        _kernels.numba_impl.polymulmod(a, b, table, level),
        _kernels.numpy_impl.polymulmod(a, b, table, level),
    )


def test_backend_env_flag():
    code = "from dihedra import _kernels; print(_kernels.BACKEND)"
    env = dict(os.environ, DIHEDRA_BACKEND="numpy")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.stdout.strip() == "numpy"
    env["DIHEDRA_BACKEND"] = "fortran"
    bad = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert bad.returncode != 0 and "DIHEDRA_BACKEND" in bad.stderr
