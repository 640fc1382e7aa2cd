"""Pure numpy implementations of the hot kernels.

Must stay signature-compatible with ``_ckernels.pyx``.
"""

from __future__ import annotations

import numpy as np


def label_masks(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Pairing and sign masks for every label index, in enumeration order."""
    idx = np.arange(4**n)
    pairing = np.zeros(4**n, dtype=np.int64)
    signs = np.zeros(4**n, dtype=np.int64)
    for v in range(n):
        token = (idx >> (2 * (n - 1 - v))) & 3
        pairing |= (token >> 1) << v
        signs |= (token & 1) << v
    return pairing, signs


def _parity(x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x)
    while np.any(x):
        out ^= x & 1
        x = x >> 1
    return out


def amplitude_table(U: np.ndarray, n: int, exchange_sign: int) -> np.ndarray:
    """Amplitudes ``<0| c_j c_i |B>`` for all labels and outcome pairs ``i <= j``.

    Returns an array of shape ``(4**n, d*(d+1)/2)`` with columns in row-major
    upper-triangle order of ``(i, j)``.
    """
    U = np.asarray(U, dtype=np.complex128)
    d = U.shape[0]
    dim = 2**n
    Uc = U.conj()
    left = Uc[:, 0::2]
    right = Uc[:, 1::2]
    iu, ju = np.triu_indices(d)
    pairing, signs = label_masks(n)
    a = np.arange(dim)
    scale = 2.0 ** (-n / 2)
    out = np.empty((4**n, iu.size), dtype=np.complex128)
    for pm in range(dim):
        rows = np.flatnonzero(pairing == pm)
        sg = 1.0 - 2.0 * _parity(a[None, :] & signs[rows][:, None])
        partner = right[:, a ^ pm]
        # M[k, i, j] = sum_a sg[k, a] * left[i, a] * partner[j, a]
        M = np.einsum("ia,ka,ja->kij", left, sg, partner, optimize=True)
        A = (M + exchange_sign * M.transpose(0, 2, 1)) * scale
        out[rows] = A[:, iu, ju]
    return out


def support_components(amps: np.ndarray, eps: float) -> np.ndarray:
    """Root label of each label after merging labels that share an outcome."""
    support = np.abs(amps) > eps
    parent = np.arange(amps.shape[0])

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for col in support.T:
        members = np.flatnonzero(col)
        if members.size < 2:
            continue
        root = find(members[0])
        for m in members[1:]:
            r = find(m)
            if r != root:
                # keep the smaller index as root
                lo, hi = min(r, root), max(r, root)
                parent[hi] = lo
                root = lo
    return np.array([find(x) for x in range(parent.size)])
