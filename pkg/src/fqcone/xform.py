"""The extension operator, pair convolution, quartic functional, and sharp constants.

Everything revolves around the representation-count table
F(u) = sum over ordered cone pairs (eta1, eta2) with eta1 + eta2 = u of
f(eta1) f(eta2), and the quartic form sum_u |F(u)|^2, which bounds the
fourth power of the extension norm through an exact Parseval factor
q^4 / |cone|^4.

Cone functions carry one of three value modes: float (complex), int
(exact integers), or unit (integer exponents k with value zeta_p^k times
a common magnitude).  The int and unit modes make equality certificates
exact: integer pair tables, and exponent histograms that collapse to a
single residue class per target point when the function is a character.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .certificates import Certificate, float_cert
from .cone import ConeCtx, point_coords
from .errors import PrincipalCharacter, ZeroFunction

# ---------------------------------------------------------------------------
# Sharp constants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SharpConstants:
    """Closed-form optimal constants of the quartic and extension inequalities."""

    q: int
    N: int                   # q^5 + 4q^4 - 4q^3 - 6q^2 + 3q + 3
    C: Fraction              # combinatorial constant N / ((q+1)^2 (q-1))
    R4: Fraction             # fourth power of the extension-norm constant
    R: float
    M: Fraction              # mass-transport constant of the reduced estimate

    def __post_init__(self):
        q = self.q
        cone = (q - 1) * (q + 1) ** 2
        assert self.C == self.R4 * cone**2 * Fraction(1, q**4)
        gap = 2 - self.M / (q - 1)
        assert gap == Fraction(5 * q**3 + q**2 - 5 * q - 2, (q * q - 1) ** 2)
        assert gap > 0


def sharp_constants(q: int) -> SharpConstants:
    N = q**5 + 4 * q**4 - 4 * q**3 - 6 * q**2 + 3 * q + 3
    C = Fraction(N, (q + 1) ** 2 * (q - 1))
    R4 = Fraction(q**4 * N, (q + 1) ** 6 * (q - 1) ** 3)
    M = Fraction(2 * q**4 - 5 * q**3 - 5 * q**2 + 5 * q + 4, (q - 1) * (q + 1) ** 2)
    return SharpConstants(q=q, N=N, C=C, R4=R4, R=float(R4) ** 0.25, M=M)


# ---------------------------------------------------------------------------
# Cone functions
# ---------------------------------------------------------------------------

FLOAT, INT, UNIT = "float", "int", "unit"


@dataclass(frozen=True)
class ConeFunction:
    """Values indexed by cone ordinal.

    mode "float": values complex128.  mode "int": values int64.  mode
    "unit": values are integer zeta_p exponents and the function is
    magnitude * zeta_p**exponent pointwise.
    """

    mode: str
    values: np.ndarray
    magnitude: float = 1.0

    def __len__(self):
        return len(self.values)

    def as_complex(self, cc: ConeCtx) -> np.ndarray:
        if self.mode == UNIT:
            return self.magnitude * cc.fctx.zeta[self.values % cc.fctx.p]
        return self.values.astype(np.complex128)

    def mass(self, cc: ConeCtx):
        """l2 mass sum |f|^2; exact (int) in int mode, exact count in unit mode."""
        if self.mode == INT:
            return int(np.sum(self.values.astype(object) ** 2))
        if self.mode == UNIT:
            return len(self.values)  # unit-normalized; magnitude tracked separately
        return float(np.sum(np.abs(self.values) ** 2))


def coerce(cc: ConeCtx, f) -> ConeFunction:
    if isinstance(f, ConeFunction):
        if len(f) != cc.size:
            raise ValueError(f"function length {len(f)} != cone size {cc.size}")
        return f
    arr = np.asarray(f)
    if len(arr) != cc.size:
        raise ValueError(f"function length {len(arr)} != cone size {cc.size}")
    if np.issubdtype(arr.dtype, np.integer):
        return ConeFunction(INT, arr.astype(np.int64))
    return ConeFunction(FLOAT, arr.astype(np.complex128))


# -- standard families -------------------------------------------------------

def constant_function(cc: ConeCtx, mode: str = FLOAT) -> ConeFunction:
    if mode == FLOAT:
        return ConeFunction(FLOAT, np.ones(cc.size, dtype=np.complex128))
    if mode == INT:
        return ConeFunction(INT, np.ones(cc.size, dtype=np.int64))
    return ConeFunction(UNIT, np.zeros(cc.size, dtype=np.int64))


def character_exponents(cc: ConeCtx, a) -> np.ndarray:
    """zeta_p exponents trace(a . eta) over the cone, a in model coordinates."""
    fctx = cc.fctx
    a = np.asarray(a, dtype=np.int64)
    c = cc.coords
    d = fctx.add(fctx.add(fctx.mul(a[0], c[:, 0]), fctx.mul(a[1], c[:, 1])),
                 fctx.add(fctx.mul(a[2], c[:, 2]), fctx.mul(a[3], c[:, 3])))
    return fctx.trace[d].astype(np.int64)


def character_function(cc: ConeCtx, a, lam: complex = 1.0, mode: str = FLOAT) -> ConeFunction:
    expo = character_exponents(cc, a)
    if mode == UNIT:
        return ConeFunction(UNIT, expo, magnitude=abs(lam))
    return ConeFunction(FLOAT, lam * cc.fctx.zeta[expo])


def indicator_function(cc: ConeCtx, point: int) -> ConeFunction:
    v = np.zeros(cc.size, dtype=np.complex128)
    v[cc.ordinal(point)] = 1.0
    return ConeFunction(FLOAT, v)


def random_complex(cc: ConeCtx, rng) -> ConeFunction:
    v = rng.uniform(-1, 1, cc.size) + 1j * rng.uniform(-1, 1, cc.size)
    return ConeFunction(FLOAT, v)


def random_int(cc: ConeCtx, rng, lo: int = -10, hi: int = 10) -> ConeFunction:
    return ConeFunction(INT, rng.integers(lo, hi + 1, cc.size).astype(np.int64))


def random_even_nonneg(cc: ConeCtx, rng) -> ConeFunction:
    """Even nonnegative sample, the reduced regime of the main estimate."""
    return symmetrize(cc, random_complex(cc, rng))


def random_unimodular(cc: ConeCtx, rng) -> ConeFunction:
    return ConeFunction(FLOAT, np.exp(2j * np.pi * rng.uniform(0, 1, cc.size)))


# ---------------------------------------------------------------------------
# Pair convolution and the quartic form
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RepCountTable:
    """F(u) over all u in F_q^4, indexed by Point4 index.

    float mode: complex values.  int mode: exact int64 values.  unit mode:
    per-u histogram of zeta_p exponents (shape (q^4, p)); the table is
    sum_k hist[u, k] zeta^k times magnitude^2.
    """

    mode: str
    q: int
    values: np.ndarray | None = None
    hist: np.ndarray | None = None

    @property
    def counts(self) -> np.ndarray:
        return self.hist.sum(axis=1)

    def concentrated(self) -> bool:
        """True when every target point sees a single exponent class."""
        return bool(((self.hist > 0).sum(axis=1) <= 1).all())


def pair_convolution(cc: ConeCtx, f, g=None) -> RepCountTable:
    """All q^4 values of F(u) by one loop over ordered cone pairs."""
    f = coerce(cc, f)
    g = f if g is None else coerce(cc, g)
    add = cc.fctx.dense_add_table()
    if f.mode == UNIT:
        if g is not f:
            raise ValueError("unit-mode pair convolution requires g = f")
        expo = (f.values % cc.fctx.p).astype(np.int64)
        hist = kernels.pair_exponent_hist(cc.coords, expo, add, cc.fctx.p, cc.q)
        return RepCountTable(mode=UNIT, q=cc.q, hist=hist)
    if f.mode == INT and g.mode == INT:
        vals = kernels.pair_table_int(cc.coords, f.values, g.values, add, cc.q)
        return RepCountTable(mode=INT, q=cc.q, values=vals)
    vals = kernels.pair_table_complex(cc.coords, f.as_complex(cc), g.as_complex(cc),
                                      add, cc.q)
    return RepCountTable(mode=FLOAT, q=cc.q, values=vals)


def quartic_lhs(table: RepCountTable):
    """sum_u |F(u)|^2; exact int for int tables and concentrated unit tables."""
    if table.mode == INT:
        return sum(int(v) ** 2 for v in table.values.tolist())
    if table.mode == UNIT:
        if not table.concentrated():
            raise ValueError("unit table has mixed exponents; use float mode")
        return sum(int(c) ** 2 for c in table.counts.tolist())
    return float(np.sum(np.abs(table.values) ** 2))


def quartic_of(cc: ConeCtx, f):
    return quartic_lhs(pair_convolution(cc, f))


def ratio(cc: ConeCtx, f) -> float:
    """Quartic functional over squared mass; at most C(q), with equality
    exactly on nonzero multiples of characters."""
    f = coerce(cc, f)
    fm = float(f.mass(cc)) * (f.magnitude**2 if f.mode == UNIT else 1.0)
    if fm == 0.0:
        raise ZeroFunction("ratio undefined for the zero function")
    quart = quartic_of(cc, f if f.mode != UNIT else
                       ConeFunction(FLOAT, f.as_complex(cc)))
    return float(quart) / fm**2


def ratio_exact(cc: ConeCtx, f) -> Fraction:
    """Exact ratio for int- or unit-mode functions (scale invariant)."""
    f = coerce(cc, f)
    if f.mode == FLOAT:
        raise ValueError("exact ratio requires int or unit mode")
    quart = quartic_lhs(pair_convolution(cc, f))
    mass = f.mass(cc)
    if mass == 0:
        raise ZeroFunction("ratio undefined for the zero function")
    return Fraction(quart, mass**2)


# ---------------------------------------------------------------------------
# Symmetrization and the quadrilinear form
# ---------------------------------------------------------------------------

def symmetrize(cc: ConeCtx, f) -> ConeFunction:
    """Antipodal symmetrization sqrt((|f(x)|^2 + |f(-x)|^2) / 2).

    Preserves the l2 mass, never decreases the quartic functional, and
    fixes even nonnegative functions.
    """
    v = coerce(cc, f).as_complex(cc)
    out = np.sqrt((np.abs(v) ** 2 + np.abs(v[cc.neg_perm]) ** 2) / 2.0)
    return ConeFunction(FLOAT, out.astype(np.complex128))


def quadrilinear_q(cc: ConeCtx, f1, f2, f3, f4) -> complex:
    """Four-linear form over cone quadruples summing to zero.

    Q(f,f,f,f) equals the quartic left side for every f; computed with two
    bilinear pair tables and one q^4 contraction.
    """
    vs = [coerce(cc, f).as_complex(cc) for f in (f1, f2, f3, f4)]
    g2 = np.conj(vs[1])[cc.neg_perm]   # eta -> conj(f2(-eta))
    g4 = np.conj(vs[3])[cc.neg_perm]
    t12 = pair_convolution(cc, ConeFunction(FLOAT, vs[0]), ConeFunction(FLOAT, g2))
    t34 = pair_convolution(cc, ConeFunction(FLOAT, vs[2]), ConeFunction(FLOAT, g4))
    return complex(np.sum(t12.values * t34.values[cc.neg_index]))


# ---------------------------------------------------------------------------
# Extension operator and norms
# ---------------------------------------------------------------------------

def extension_values(cc: ConeCtx, f, a: int = 1) -> np.ndarray:
    """(f sigma)-check on every x in F_q^4 for the character indexed by a."""
    if a % cc.fctx.q == 0:
        raise PrincipalCharacter("extension requires a non-principal character")
    fctx = cc.fctx
    mul = fctx.dense_mul_table()
    mul_a = np.ascontiguousarray(mul[a]).astype(np.int32)
    return kernels.extension_table(cc.coords, coerce(cc, f).as_complex(cc), mul_a,
                                   mul, fctx.dense_add_table(),
                                   fctx.trace.astype(np.int64), fctx.zeta, cc.q)


def extension(cc: ConeCtx, f, x: int, a: int = 1) -> complex:
    """Single-point extension value at the point with index x."""
    if a % cc.fctx.q == 0:
        raise PrincipalCharacter("extension requires a non-principal character")
    fctx = cc.fctx
    xc = point_coords(cc.q, x)
    c = cc.coords
    dot = fctx.add(fctx.add(fctx.mul(c[:, 0], int(xc[0])), fctx.mul(c[:, 1], int(xc[1]))),
                   fctx.add(fctx.mul(c[:, 2], int(xc[2])), fctx.mul(c[:, 3], int(xc[3]))))
    phases = fctx.zeta[fctx.char_exponent(a, dot)]
    return complex(np.sum(coerce(cc, f).as_complex(cc) * phases) / cc.size)


def norms(cc: ConeCtx, f, a: int = 1) -> dict:
    """l2 norm against normalized surface measure and l4 counting norm."""
    fv = coerce(cc, f).as_complex(cc)
    l2 = float(np.sqrt(np.sum(np.abs(fv) ** 2) / cc.size))
    ext = extension_values(cc, f, a)
    l4 = float(np.sum(np.abs(ext) ** 4)) ** 0.25
    return {"l2_sigma": l2, "l4_counting": l4}


def verify_duality(cc: ConeCtx, f, a: int = 1, tol: float = 1e-9) -> Certificate:
    """Parseval bridge: ||(f sigma)-check||_4^4 = (q^4 / |cone|^4) * sum|F|^2."""
    ext = extension_values(cc, f, a)
    lhs = float(np.sum(np.abs(ext) ** 4))
    quart = quartic_of(cc, coerce(cc, f))
    rhs = cc.q**4 / cc.size**4 * float(quart)
    return float_cert("duality-parseval", cc.q, lhs, rhs, tol,
                      scale=max(abs(lhs), abs(rhs)), a=a)
