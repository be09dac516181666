"""Hot loop for the brute-force bidisc supremum of |Psi_z|.

The numba kernel is used when numba imports and ``HEXABLOCK_NO_NUMBA`` is
unset (or "0").  The numpy path is kept bit-compatible in what it evaluates so
the two can be compared directly (see ``benchmarks/bench_kernels.py``).
"""

from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("HEXABLOCK_NO_NUMBA", "0").strip().lower() not in ("", "0", "false", "no")

try:  # pragma: no cover - exercised implicitly
    if _DISABLED:
        raise ImportError
    from numba import njit
    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False


def _psi_abs_max_numpy(a, x1, x2, x3, r1, t1, r2, t2):
    z1 = (r1[:, None] * np.exp(1j * t1[None, :])).ravel()
    z2 = (r2[:, None] * np.exp(1j * t2[None, :])).ravel()
    w1 = np.sqrt(1.0 - np.abs(z1) ** 2)
    w2 = np.sqrt(1.0 - np.abs(z2) ** 2)
    # denominator is affine in z2 for fixed z1
    c = 1.0 - x1 * z1
    d = x2 - x3 * z1
    den = np.abs(c[:, None] - d[:, None] * z2[None, :])
    num = abs(a) * w1[:, None] * w2[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        val = np.where(den > 1e-300, num / den, np.inf)
    k = int(np.argmax(val))
    i, j = divmod(k, z2.size)
    i1, j1 = divmod(i, t1.size)
    i2, j2 = divmod(j, t2.size)
    return float(val.flat[k]), i1, j1, i2, j2


def _psi_abs_max_loops(a, x1, x2, x3, r1, t1, r2, t2):
    aa = abs(a)
    best = -1.0
    b1 = b2 = b3 = b4 = 0
    n2 = r2.size * t2.size
    z2 = np.empty(n2, dtype=np.complex128)
    w2 = np.empty(n2)
    for i in range(r2.size):
        for j in range(t2.size):
            z2[i * t2.size + j] = r2[i] * np.exp(1j * t2[j])
            w2[i * t2.size + j] = np.sqrt(1.0 - r2[i] * r2[i])
    for i in range(r1.size):
        w1 = np.sqrt(1.0 - r1[i] * r1[i])
        for j in range(t1.size):
            z1 = r1[i] * np.exp(1j * t1[j])
            c = 1.0 - x1 * z1
            d = x2 - x3 * z1
            for k in range(n2):
                den = abs(c - d * z2[k])
                if den > 1e-300:
                    v = aa * w1 * w2[k] / den
                else:
                    v = np.inf
                if v > best:
                    best = v
                    b1 = i
                    b2 = j
                    b3 = k // t2.size
                    b4 = k % t2.size
    return best, b1, b2, b3, b4


if HAVE_NUMBA:
    _psi_abs_max_numba = njit(cache=True)(_psi_abs_max_loops)
else:
    _psi_abs_max_numba = None


def psi_abs_max(a, x1, x2, x3, r1, t1, r2, t2, backend: str | None = None):
    """Max of |Psi_z| over the tensor grid (r1 x t1) x (r2 x t2).

    Returns (value, i_r1, i_t1, i_r2, i_t2).
    """
    args = (complex(a), complex(x1), complex(x2), complex(x3),
            np.ascontiguousarray(r1, dtype=np.float64), np.ascontiguousarray(t1, dtype=np.float64),
            np.ascontiguousarray(r2, dtype=np.float64), np.ascontiguousarray(t2, dtype=np.float64))
    if backend is None:
        backend = "numba" if HAVE_NUMBA else "numpy"
    if backend == "numba":
        if _psi_abs_max_numba is None:
            raise RuntimeError("numba backend requested but unavailable")
        v, i, j, k, l = _psi_abs_max_numba(*args)
        return float(v), int(i), int(j), int(k), int(l)
    if backend == "numpy":
        return _psi_abs_max_numpy(*args)
    raise ValueError(f"unknown backend {backend!r}")
