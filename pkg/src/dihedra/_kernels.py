"""Hot inner loops, each with a numba version and a pure-numpy version.

The numba path is used when numba imports and ``DIHEDRA_BACKEND`` is not
set to ``numpy``. Both paths are always importable so tests and the
benchmark can compare them directly.

All kernels take and return int64 data; callers are responsible for
checking that values fit (see ``cyclo`` for the overflow guard).
"""
from __future__ import annotations

import math
import os

import numpy as np

__all__ = [
    "BACKEND",
    "reduced_count",
    "reduced_solutions",
    "reduced_count_cube",
    "polymulmod",
    "numpy_impl",
    "numba_impl",
]

# -- pure numpy ----------------------------------------------------------


def _np_box(a1: int, a2: int, a3: int) -> np.ndarray:
    n = math.lcm(a1, a2, a3)
    b1, b2, b3 = n // a1, n // a2, n // a3
    c1 = np.arange(1, a1, dtype=np.int64)
    c1 = c1[np.gcd(c1, a1) == 1]
    c2 = np.arange(1, a2, dtype=np.int64)
    c2 = c2[np.gcd(c2, a2) == 1]
    rest = n - b1 * c1[:, None] - b2 * c2[None, :]
    ok = rest % b3 == 0
    c3 = rest // b3
    ok &= np.abs(c3) < a3
    ok &= np.gcd(c3, a3) == 1
    i, j = np.nonzero(ok)
    return np.stack([c1[i], c2[j], c3[i, j]], axis=1).astype(np.int64)


def _np_reduced_count(a1: int, a2: int, a3: int) -> int:
    return int(_np_box(a1, a2, a3).shape[0])


def _np_reduced_solutions(a1: int, a2: int, a3: int) -> np.ndarray:
    return _np_box(a1, a2, a3)


def _np_reduced_count_cube(max_a: int) -> np.ndarray:
    out = np.zeros((max_a + 1,) * 3, dtype=np.int64)
    for a1 in range(2, max_a + 1):
        for a2 in range(2, max_a + 1):
            for a3 in range(2, max_a + 1):
                out[a1, a2, a3] = _np_reduced_count(a1, a2, a3)
    return out


def _np_polymulmod(a: np.ndarray, b: np.ndarray, table: np.ndarray, level: int) -> np.ndarray:
    c = np.convolve(a, b)
    if c.shape[0] > level:
        head = c[:level].copy()
        head[: c.shape[0] - level] += c[level:]
        c = head
    return c @ table[: c.shape[0]]


class _Namespace:
    def __init__(self, **fns):
        self.__dict__.update(fns)


numpy_impl = _Namespace(
    reduced_count=_np_reduced_count,
    reduced_solutions=_np_reduced_solutions,
    reduced_count_cube=_np_reduced_count_cube,
    polymulmod=_np_polymulmod,
)

# -- numba ---------------------------------------------------------------

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    njit = None

if njit is not None:

    @njit(cache=True)
    def _nb_gcd(a, b):
        if a < 0:
            a = -a
        if b < 0:
            b = -b
        while b:
            a, b = b, a % b
        return a

    @njit(cache=True)
    def _nb_box(a1, a2, a3, out):
        # fills out[k] = (c1, c2, c3) when out has rows; always returns count
        n = a1 // _nb_gcd(a1, a2) * a2
        n = n // _nb_gcd(n, a3) * a3
        b1 = n // a1
        b2 = n // a2
        b3 = n // a3
        k = 0
        for c1 in range(1, a1):
            if _nb_gcd(c1, a1) != 1:
                continue
            for c2 in range(1, a2):
                if _nb_gcd(c2, a2) != 1:
                    continue
                rest = n - b1 * c1 - b2 * c2
                if rest % b3 != 0:
                    continue
                c3 = rest // b3
                if c3 >= a3 or c3 <= -a3:
                    continue
                if _nb_gcd(c3, a3) != 1:
                    continue
                if k < out.shape[0]:
                    out[k, 0] = c1
                    out[k, 1] = c2
                    out[k, 2] = c3
                k += 1
        return k

    @njit(cache=True)
    def _nb_cube(max_a, out):
        scratch = np.empty((0, 3), dtype=np.int64)
        for a1 in range(2, max_a + 1):
            for a2 in range(2, max_a + 1):
                for a3 in range(2, max_a + 1):
                    out[a1, a2, a3] = _nb_box(a1, a2, a3, scratch)

    @njit(cache=True)
    def _nb_polymulmod(a, b, table, level):
        la = a.shape[0]
        lb = b.shape[0]
        lc = la + lb - 1
        width = lc if lc < level else level
        c = np.zeros(width, dtype=np.int64)
        for i in range(la):
            ai = a[i]
            if ai == 0:
                continue
            for j in range(lb):
                k = i + j
                if k >= level:
                    k -= level
                c[k] += ai * b[j]
        deg = table.shape[1]
        out = np.zeros(deg, dtype=np.int64)
        for k in range(width):
            ck = c[k]
            if ck == 0:
                continue
            for j in range(deg):
                out[j] += ck * table[k, j]
        return out

    def _nb_reduced_count(a1: int, a2: int, a3: int) -> int:
        return int(_nb_box(a1, a2, a3, np.empty((0, 3), dtype=np.int64)))

    def _nb_reduced_solutions(a1: int, a2: int, a3: int) -> np.ndarray:
        k = _nb_box(a1, a2, a3, np.empty((0, 3), dtype=np.int64))
        out = np.empty((k, 3), dtype=np.int64)
        _nb_box(a1, a2, a3, out)
        return out

    def _nb_reduced_count_cube(max_a: int) -> np.ndarray:
        out = np.zeros((max_a + 1,) * 3, dtype=np.int64)
        _nb_cube(max_a, out)
        return out

    numba_impl = _Namespace(
        reduced_count=_nb_reduced_count,
        reduced_solutions=_nb_reduced_solutions,
        reduced_count_cube=_nb_reduced_count_cube,
        polymulmod=_nb_polymulmod,
    )
else:  # pragma: no cover
    numba_impl = None


def _select_backend() -> str:
    want = os.environ.get("DIHEDRA_BACKEND", "numba").strip().lower()
    if want not in ("numba", "numpy"):
        raise ValueError(f"DIHEDRA_BACKEND must be 'numba' or 'numpy', got {want!r}")
    if want == "numba" and numba_impl is None:
        return "numpy"
    return want


BACKEND = _select_backend()
_impl = numba_impl if BACKEND == "numba" else numpy_impl

reduced_count = _impl.reduced_count
reduced_solutions = _impl.reduced_solutions
reduced_count_cube = _impl.reduced_count_cube
polymulmod = _impl.polymulmod
