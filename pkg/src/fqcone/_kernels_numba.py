"""Numba-compiled hot loops: pair convolution, gradient, extension sums.

Every function here has a signature-identical twin in _kernels_numpy; the
active backend is chosen in kernels.py.  All loops are serial so results
are bitwise deterministic.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def pair_table_complex(coords, f, g, add, q):
    """F(u) = sum over ordered cone pairs (i, j) of f_i * g_j at u = pt_i + pt_j."""
    m = coords.shape[0]
    q2 = q * q
    q3 = q2 * q
    out = np.zeros(q * q3, dtype=np.complex128)
    for i in range(m):
        a0 = coords[i, 0]
        a1 = coords[i, 1]
        a2 = coords[i, 2]
        a3 = coords[i, 3]
        fi = f[i]
        for j in range(m):
            u = (add[a0, coords[j, 0]]
                 + q * add[a1, coords[j, 1]]
                 + q2 * add[a2, coords[j, 2]]
                 + q3 * add[a3, coords[j, 3]])
            out[u] += fi * g[j]
    return out


@njit(cache=True)
def pair_table_int(coords, f, g, add, q):
    m = coords.shape[0]
    q2 = q * q
    q3 = q2 * q
    out = np.zeros(q * q3, dtype=np.int64)
    for i in range(m):
        a0 = coords[i, 0]
        a1 = coords[i, 1]
        a2 = coords[i, 2]
        a3 = coords[i, 3]
        fi = f[i]
        for j in range(m):
            u = (add[a0, coords[j, 0]]
                 + q * add[a1, coords[j, 1]]
                 + q2 * add[a2, coords[j, 2]]
                 + q3 * add[a3, coords[j, 3]])
            out[u] += fi * g[j]
    return out


@njit(cache=True)
def pair_count(coords, add, q):
    """|Sigma_u| for every u: ordered pairs of cone points summing to u."""
    m = coords.shape[0]
    q2 = q * q
    q3 = q2 * q
    out = np.zeros(q * q3, dtype=np.int64)
    for i in range(m):
        a0 = coords[i, 0]
        a1 = coords[i, 1]
        a2 = coords[i, 2]
        a3 = coords[i, 3]
        for j in range(m):
            u = (add[a0, coords[j, 0]]
                 + q * add[a1, coords[j, 1]]
                 + q2 * add[a2, coords[j, 2]]
                 + q3 * add[a3, coords[j, 3]])
            out[u] += 1
    return out


@njit(cache=True)
def pair_exponent_hist(coords, e, add, p, q):
    """Histogram of zeta_p exponents (e_i + e_j mod p) per target point u."""
    m = coords.shape[0]
    q2 = q * q
    q3 = q2 * q
    out = np.zeros((q * q3, p), dtype=np.int64)
    for i in range(m):
        a0 = coords[i, 0]
        a1 = coords[i, 1]
        a2 = coords[i, 2]
        a3 = coords[i, 3]
        ei = e[i]
        for j in range(m):
            u = (add[a0, coords[j, 0]]
                 + q * add[a1, coords[j, 1]]
                 + q2 * add[a2, coords[j, 2]]
                 + q3 * add[a3, coords[j, 3]])
            out[u, (ei + e[j]) % p] += 1
    return out


@njit(cache=True)
def gradient_eval(coords, f, ftab, add, q):
    """g_i = 2 * sum_j F(pt_i + pt_j) * conj(f_j), the ascent direction of sum|F|^2."""
    m = coords.shape[0]
    q2 = q * q
    q3 = q2 * q
    out = np.empty(m, dtype=np.complex128)
    for i in range(m):
        a0 = coords[i, 0]
        a1 = coords[i, 1]
        a2 = coords[i, 2]
        a3 = coords[i, 3]
        acc = 0.0 + 0.0j
        for j in range(m):
            u = (add[a0, coords[j, 0]]
                 + q * add[a1, coords[j, 1]]
                 + q2 * add[a2, coords[j, 2]]
                 + q3 * add[a3, coords[j, 3]])
            acc += ftab[u] * np.conj(f[j])
        out[i] = 2.0 * acc
    return out


@njit(cache=True)
def extension_table(coords, f, mul_a, mul, add, trace_tab, zeta, q):
    """(f sigma)-check on all of F_q^4: (1/m) sum_j f_j zeta^{tr(a * (pt_j . x))}."""
    m = coords.shape[0]
    q2 = q * q
    q3 = q2 * q
    q4 = q * q3
    out = np.empty(q4, dtype=np.complex128)
    for xidx in range(q4):
        x0 = xidx % q
        t = xidx // q
        x1 = t % q
        t //= q
        x2 = t % q
        x3 = t // q
        acc = 0.0 + 0.0j
        for j in range(m):
            d = add[add[mul[coords[j, 0], x0], mul[coords[j, 1], x1]],
                    add[mul[coords[j, 2], x2], mul[coords[j, 3], x3]]]
            acc += f[j] * zeta[trace_tab[mul_a[d]]]
        out[xidx] = acc / m
    return out
