# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_kernels_py``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()


def amplitude_table(U, int n, int exchange_sign):
    """Same contract as the numpy version.

    For a fixed pairing mask the amplitudes of all ``2**n`` sign masks are the
    Walsh-Hadamard transform, over the left value string, of the per-string
    symmetrized products; an in-place fast transform does all of them at once.
    """
    cdef double complex[:, ::1] Uc = np.ascontiguousarray(np.conj(U), dtype=np.complex128)
    cdef Py_ssize_t d = Uc.shape[0]
    cdef long dim = 1 << n
    cdef long nlabels = 1 << (2 * n)
    cdef Py_ssize_t npairs = d * (d + 1) // 2
    out_arr = np.empty((nlabels, npairs), dtype=np.complex128)
    cdef double complex[:, ::1] out = out_arr
    work_arr = np.empty((dim, npairs), dtype=np.complex128)
    cdef double complex[:, ::1] work = work_arr
    cdef double scale = 1.0 / sqrt(<double>dim)
    cdef double ex = exchange_sign
    cdef long pm, sm, a, r, h, blk, label
    cdef int v
    cdef Py_ssize_t i, j, col
    cdef double complex li, ri, x, y
    with nogil:
        for pm in range(dim):
            for a in range(dim):
                r = 2 * (a ^ pm) + 1
                col = 0
                for i in range(d):
                    li = Uc[i, 2 * a]
                    ri = Uc[i, r]
                    for j in range(i, d):
                        work[a, col] = li * Uc[j, r] + ex * Uc[j, 2 * a] * ri
                        col += 1
            h = 1
            while h < dim:
                blk = 0
                while blk < dim:
                    for a in range(blk, blk + h):
                        for col in range(npairs):
                            x = work[a, col]
                            y = work[a + h, col]
                            work[a, col] = x + y
                            work[a + h, col] = x - y
                    blk += 2 * h
                h *= 2
            for sm in range(dim):
                label = 0
                for v in range(n):
                    label = 4 * label + 2 * ((pm >> v) & 1) + ((sm >> v) & 1)
                for col in range(npairs):
                    out[label, col] = work[sm, col] * scale
    return out_arr


cdef inline long _find(long[::1] parent, long x) nogil:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def support_components(amps, double eps):
    cdef double[:, ::1] mag = np.ascontiguousarray(np.abs(amps), dtype=np.float64)
    cdef Py_ssize_t nlabels = mag.shape[0]
    cdef Py_ssize_t npairs = mag.shape[1]
    parent_arr = np.arange(nlabels, dtype=np.dtype("l"))
    cdef long[::1] parent = parent_arr
    cdef Py_ssize_t col, k
    cdef long root, r, lo, hi
    with nogil:
        for col in range(npairs):
            root = -1
            for k in range(nlabels):
                if mag[k, col] > eps:
                    if root < 0:
                        root = _find(parent, k)
                        continue
                    r = _find(parent, k)
                    if r != root:
                        lo = r if r < root else root
                        hi = root if r < root else r
                        parent[hi] = lo
                        root = lo
        for k in range(nlabels):
            parent[k] = _find(parent, k)
    return parent_arr.astype(np.int64)
