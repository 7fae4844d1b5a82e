# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Gray-code enumeration kernel for the exact syndrome-distribution backend.

Walks all 2**n Pauli-Z support vectors in Gray-code order, so each step
flips a single bit and the running syndrome index, coset bit and weight
update in O(1).  The output is the theta-independent count table

    counts[s, b, w] = #{v : syndrome(v) = s, parity(v & xbar) = b, |v| = w}

from which amplitudes at any rotation angle follow by a small matrix
product.  Counts are exact (<= 2**25 fits a double-free int64).
"""

import numpy as np


def count_table(int n, check_masks, unsigned long long xbar_mask):
    """Count support vectors by (syndrome index, coset bit, weight).

    ``check_masks`` is a sequence of X-check qubit masks; bit k of the
    syndrome index is the parity of ``v & check_masks[k]``.
    """
    if n < 0 or n > 25:
        raise ValueError(f"kernel supports 0 <= n <= 25, got {n}")
    cdef int r = len(check_masks)
    cdef unsigned long long[::1] masks = np.asarray(check_masks, dtype=np.uint64)

    # per-bit increments for the gray-code walk
    cdef unsigned int[::1] bit_smask = np.zeros(max(n, 1), dtype=np.uint32)
    cdef unsigned char[::1] bit_xbar = np.zeros(max(n, 1), dtype=np.uint8)
    cdef int j, k
    for j in range(n):
        for k in range(r):
            if (masks[k] >> j) & 1:
                bit_smask[j] ^= 1u << k
        bit_xbar[j] = (xbar_mask >> j) & 1

    cdef Py_ssize_t size = (1 << (r + 1)) * (n + 1)
    out_arr = np.zeros(size, dtype=np.int64)
    cdef long long[::1] out = out_arr

    cdef unsigned long long total = 1ULL << n
    cdef unsigned long long i, v = 0
    cdef unsigned int s = 0
    cdef unsigned int b = 0
    cdef int w = 0
    out[0] += 1  # v = 0
    for i in range(1, total):
        j = 0
        while not (i >> j) & 1:
            j += 1
        v ^= 1ULL << j
        if (v >> j) & 1:
            w += 1
        else:
            w -= 1
        s ^= bit_smask[j]
        b ^= bit_xbar[j]
        out[(((<Py_ssize_t> s) << 1) | b) * (n + 1) + w] += 1

    return out_arr.reshape(1 << r, 2, n + 1)
