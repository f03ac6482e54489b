# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled inertia kernels.

Hot loops behind eigenvalue counting: the LDL^T pivot signs of a shifted
pencil give the number of eigenvalues below the shift (Sylvester's law of
inertia).  Two matrix shapes are supported:

* symmetric tridiagonal (``tridiag_inertia``) — one O(n) Sturm-sequence
  pass; this is the inner loop of 1D eigenvalue bisection and of the
  counting experiments, where it runs tens of times per query;
* symmetric banded (``banded_inertia``) — LDL^T without pivoting on
  LAPACK-style lower band storage, O(n * bw^2); used by the 2D module.

Near-zero pivots are flagged, not resolved: a pivot with ``|p| < pivmin``
means the shift is numerically an eigenvalue and the caller is expected to
retry with a perturbed shift.  Substituting ``pivmin`` with the original
sign (or ``-pivmin`` for an exact zero) keeps the pass finite in that case.

A pure-NumPy fallback with the same signatures lives in ``fallback.py``.
"""

from libc.math cimport fabs

import numpy as np


def tridiag_inertia(double[::1] diag, double[::1] off, double pivmin):
    """Inertia pass over a symmetric tridiagonal matrix.

    Parameters
    ----------
    diag : (n,) contiguous float64 array, main diagonal.
    off : (n-1,) contiguous float64 array, first off-diagonal.
    pivmin : pivot magnitudes below this count as numerically zero.

    Returns
    -------
    (neg, zero_hits) : number of negative pivots and number of pivots that
        had to be regularized because ``|pivot| < pivmin``.
    """
    cdef Py_ssize_t n = diag.shape[0]
    cdef Py_ssize_t i
    cdef double p
    cdef int neg = 0, zero_hits = 0
    if n == 0:
        return 0, 0
    if off.shape[0] != n - 1:
        raise ValueError("off-diagonal must have length n-1")
    with nogil:
        p = diag[0]
        if fabs(p) < pivmin:
            zero_hits += 1
            p = pivmin if p > 0.0 else -pivmin
        if p < 0.0:
            neg += 1
        for i in range(1, n):
            p = diag[i] - off[i - 1] * off[i - 1] / p
            if fabs(p) < pivmin:
                zero_hits += 1
                p = pivmin if p > 0.0 else -pivmin
            if p < 0.0:
                neg += 1
    return neg, zero_hits


def banded_inertia(double[:, ::1] ab, double pivmin):
    """Inertia of a symmetric banded matrix via LDL^T without pivoting.

    Parameters
    ----------
    ab : (bw+1, n) contiguous float64 array, LAPACK lower band storage:
        ``ab[i, j] = A[j + i, j]``.  Modified in place (pass a copy).
    pivmin : pivot regularization threshold, as in ``tridiag_inertia``.

    Returns
    -------
    (neg, zero_hits)
    """
    cdef Py_ssize_t bw = ab.shape[0] - 1
    cdef Py_ssize_t n = ab.shape[1]
    cdef Py_ssize_t j, c, i, w
    cdef double p, ljc, acj
    cdef int neg = 0, zero_hits = 0
    with nogil:
        for j in range(n):
            p = ab[0, j]
            if fabs(p) < pivmin:
                zero_hits += 1
                p = pivmin if p > 0.0 else -pivmin
            if p < 0.0:
                neg += 1
            w = bw if bw < n - 1 - j else n - 1 - j
            # trailing update: A[r, c] -= A[r, j] A[c, j] / p  for j < c <= r
            for c in range(1, w + 1):
                acj = ab[c, j] / p
                if acj == 0.0:
                    continue
                for i in range(0, w - c + 1):
                    ab[i, j + c] -= acj * ab[c + i, j]
    return neg, zero_hits
