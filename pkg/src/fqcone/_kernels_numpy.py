"""Pure-numpy fallbacks for the compiled kernels.

Same contracts as _kernels_numba.  The pair loops run blocked over the
outer index so peak memory stays bounded; integer kernels scatter with
np.add.at to keep results exact.
"""

import numpy as np

_BLOCK = 256


def _pair_targets(coords, add, q, rows):
    """(len(rows), m) int64 matrix of Point4 indices pt_rows + pt_all."""
    c = coords
    u = add[c[rows, 0][:, None], c[:, 0]].astype(np.int64)
    u += q * add[c[rows, 1][:, None], c[:, 1]]
    u += (q * q) * add[c[rows, 2][:, None], c[:, 2]]
    u += (q * q * q) * add[c[rows, 3][:, None], c[:, 3]]
    return u


def pair_table_complex(coords, f, g, add, q):
    m = coords.shape[0]
    q4 = q**4
    re = np.zeros(q4)
    im = np.zeros(q4)
    for s in range(0, m, _BLOCK):
        rows = np.arange(s, min(s + _BLOCK, m))
        u = _pair_targets(coords, add, q, rows).ravel()
        prod = (f[rows][:, None] * g[None, :]).ravel()
        re += np.bincount(u, weights=prod.real, minlength=q4)
        im += np.bincount(u, weights=prod.imag, minlength=q4)
    return re + 1j * im


def pair_table_int(coords, f, g, add, q):
    m = coords.shape[0]
    out = np.zeros(q**4, dtype=np.int64)
    for s in range(0, m, _BLOCK):
        rows = np.arange(s, min(s + _BLOCK, m))
        u = _pair_targets(coords, add, q, rows).ravel()
        prod = (f[rows][:, None] * g[None, :]).ravel()
        np.add.at(out, u, prod)
    return out


def pair_count(coords, add, q):
    m = coords.shape[0]
    out = np.zeros(q**4, dtype=np.int64)
    for s in range(0, m, _BLOCK):
        rows = np.arange(s, min(s + _BLOCK, m))
        u = _pair_targets(coords, add, q, rows).ravel()
        out += np.bincount(u, minlength=q**4)
    return out


def pair_exponent_hist(coords, e, add, p, q):
    m = coords.shape[0]
    out = np.zeros(q**4 * p, dtype=np.int64)
    for s in range(0, m, _BLOCK):
        rows = np.arange(s, min(s + _BLOCK, m))
        u = _pair_targets(coords, add, q, rows)
        expo = (e[rows][:, None] + e[None, :]) % p
        np.add.at(out, (u * p + expo).ravel(), 1)
    return out.reshape(q**4, p)


def gradient_eval(coords, f, ftab, add, q):
    m = coords.shape[0]
    out = np.empty(m, dtype=np.complex128)
    fc = np.conj(f)
    for s in range(0, m, _BLOCK):
        rows = np.arange(s, min(s + _BLOCK, m))
        u = _pair_targets(coords, add, q, rows)
        out[rows] = 2.0 * (ftab[u] * fc[None, :]).sum(axis=1)
    return out


def extension_table(coords, f, mul_a, mul, add, trace_tab, zeta, q):
    # Separable form: the character of a dot product factors per coordinate,
    # so the sum is a rank-4 tensor contraction with one q x q phase matrix.
    m = coords.shape[0]
    pt = (coords[:, 0].astype(np.int64)
          + q * coords[:, 1] + q * q * coords[:, 2] + q**3 * coords[:, 3])
    cube = np.zeros(q**4, dtype=np.complex128)
    cube[pt] = f
    t = cube.reshape(q, q, q, q)  # axes (x4, x3, x2, x1) for this index layout
    phase = zeta[trace_tab[mul_a[mul]]]  # phase[x, c] = zeta^{tr(a*x*c)}
    for ax in range(4):
        t = np.moveaxis(np.tensordot(phase, t, axes=(1, ax)), 0, ax)
    return t.ravel() / m
