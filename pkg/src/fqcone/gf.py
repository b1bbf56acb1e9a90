"""Exact arithmetic in F_q = F_{p^n}, the trace map, and additive characters.

Elements are encoded as integers in [0, q): the element with coefficient
vector (c_0, ..., c_{n-1}) over F_p gets index sum(c_r * p**r).  Index 0 is
the additive identity and index 1 the multiplicative identity.  Arithmetic
is backed by a discrete-log (Zech) core of size O(q); dense q x q add/mul
tables are materialized lazily for the compiled kernels.

The modulus polynomial is the lexicographically smallest monic irreducible
of its degree, coefficients compared low-degree-first, so field construction
is deterministic and reproducible without external polynomial tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import BudgetExceeded, CompositeP, PrincipalCharacter

DEFAULT_MAX_Q = 2**20
DENSE_TABLE_MAX_Q = 4096


def is_odd_prime(p: int) -> bool:
    if p < 3 or p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


# ---------------------------------------------------------------------------
# Polynomial helpers over F_p (coefficient lists, low degree first)
# ---------------------------------------------------------------------------

def _poly_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a, m, p):
    """Remainder of a modulo monic m, coefficients mod p."""
    a = list(a)
    dm = len(m) - 1
    while len(a) - 1 >= dm and any(a):
        shift = len(a) - 1 - dm
        lead = a[-1]
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - lead * c) % p
        _poly_trim(a)
        if not a:
            break
    return a


def _poly_divides(d, a, p):
    """True if monic d divides a over F_p."""
    return not _poly_mod(a, d, p)


def poly_is_irreducible(coeffs, p: int) -> bool:
    """Exhaustive factor search: no monic divisor of degree 1..deg//2."""
    deg = len(coeffs) - 1
    if deg < 1 or coeffs[-1] != 1:
        return False
    if deg == 1:
        return True
    for d in range(1, deg // 2 + 1):
        for k in range(p**d):
            div = [(k // p**i) % p for i in range(d)] + [1]
            if _poly_divides(div, coeffs, p):
                return False
    return True


def smallest_irreducible(p: int, n: int):
    """Lexicographically smallest monic irreducible of degree n over F_p.

    Coefficient tuples (c_0, ..., c_{n-1}) are compared low-degree-first,
    i.e. c_0 is the most significant comparison key.
    """
    if n == 1:
        return (0, 1)
    for k in range(p**n):
        coeffs = [(k // p ** (n - 1 - r)) % p for r in range(n)] + [1]
        if poly_is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise RuntimeError(f"no irreducible polynomial of degree {n} over F_{p}")


# ---------------------------------------------------------------------------
# Field context
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldParams:
    p: int
    n: int
    modulus: tuple  # length n+1, monic, low degree first

    @property
    def q(self) -> int:
        return self.p**self.n


@dataclass(frozen=True, eq=False)
class FieldCtx:
    """Immutable arithmetic context for F_{p^n}.

    All arrays are read-only; a context is safe to share between workers.
    Scalar ops accept plain ints or numpy integer arrays interchangeably.
    """

    params: FieldParams
    digits: np.ndarray        # (q, n) base-p coefficient vectors
    exp: np.ndarray           # (q-1,) exp[k] = index of g**k
    log: np.ndarray           # (q,)  log[exp[k]] = k, log[0] = -1
    trace: np.ndarray         # (q,)  values in [0, p)
    inverse: np.ndarray       # (q,)  inverse[0] = 0 sentinel
    sqrt_minus_one: int | None
    zeta: np.ndarray          # (p,) complex p-th roots of unity
    _dense: dict = field(default_factory=dict, repr=False)

    @property
    def p(self) -> int:
        return self.params.p

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def q(self) -> int:
        return self.params.q

    # -- scalar/vector arithmetic ------------------------------------------

    def add(self, x, y):
        d = (self.digits[x] + self.digits[y]) % self.p
        return self._recompose(d)

    def sub(self, x, y):
        d = (self.digits[x] - self.digits[y]) % self.p
        return self._recompose(d)

    def neg(self, x):
        return self._recompose((-self.digits[x]) % self.p)

    def mul(self, x, y):
        x = np.asarray(x)
        y = np.asarray(y)
        lx = self.log[x]
        ly = self.log[y]
        out = self.exp[(lx + ly) % (self.q - 1)]
        out = np.where((lx < 0) | (ly < 0), 0, out)
        return out if out.ndim else int(out)

    def inv(self, x):
        if np.any(np.asarray(x) == 0):
            raise ZeroDivisionError("inverse of 0 in F_q")
        out = self.inverse[x]
        return out if isinstance(out, np.ndarray) else int(out)

    def pow(self, x, k: int):
        if np.asarray(x).ndim == 0 and x == 0:
            return 0 if k else 1
        lx = self.log[x]
        return int(self.exp[(lx * k) % (self.q - 1)])

    def _recompose(self, d):
        out = (d * self._pows).sum(axis=-1)
        return out if isinstance(out, np.ndarray) and out.ndim else int(out)

    @property
    def _pows(self):
        return self.p ** np.arange(self.n, dtype=np.int64)

    # -- characters ----------------------------------------------------------

    def char_exponent(self, a, x):
        """Integer exponent of zeta_p: trace(a*x), in [0, p)."""
        t = self.trace[self.mul(a, x)]
        return t if isinstance(t, np.ndarray) else int(t)

    def char_value(self, a, x):
        """exp(2*pi*i/p * trace(a*x)); principal character when a = 0."""
        v = self.zeta[self.char_exponent(a, x)]
        return v if isinstance(v, np.ndarray) else complex(v)

    # -- dense tables for kernels ---------------------------------------------

    def dense_add_table(self) -> np.ndarray:
        """(q, q) int32 addition table; built on first use."""
        if "add" not in self._dense:
            if self.q > DENSE_TABLE_MAX_Q:
                raise BudgetExceeded(
                    f"dense tables capped at q <= {DENSE_TABLE_MAX_Q}, got q = {self.q}")
            d = (self.digits[:, None, :] + self.digits[None, :, :]) % self.p
            tab = (d * self._pows).sum(axis=-1).astype(np.int32)
            tab.setflags(write=False)
            self._dense["add"] = tab
        return self._dense["add"]

    def dense_mul_table(self) -> np.ndarray:
        """(q, q) int32 multiplication table; built on first use."""
        if "mul" not in self._dense:
            if self.q > DENSE_TABLE_MAX_Q:
                raise BudgetExceeded(
                    f"dense tables capped at q <= {DENSE_TABLE_MAX_Q}, got q = {self.q}")
            ls = self.log[:, None] + self.log[None, :]
            tab = self.exp[ls % (self.q - 1)].astype(np.int32)
            tab[0, :] = 0
            tab[:, 0] = 0
            tab.setflags(write=False)
            self._dense["mul"] = tab
        return self._dense["mul"]

    def describe(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "q": self.q,
            "modulus": list(self.params.modulus),
            "q_mod_4": self.q % 4,
            "sqrt_minus_one": self.sqrt_minus_one,
        }


def _poly_mul_mod(a, b, modulus, p):
    deg = len(a)
    prod = [0] * (2 * deg - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    r = _poly_mod(prod, list(modulus), p)
    return r + [0] * (deg - len(r))


def _find_generator(p, n, modulus, q):
    """Smallest-index generator of the multiplicative group."""
    factors = set()
    m = q - 1
    f = 2
    while f * f <= m:
        while m % f == 0:
            factors.add(f)
            m //= f
        f += 1
    if m > 1:
        factors.add(m)

    def idx_to_poly(i):
        return [(i // p**r) % p for r in range(n)]

    def poly_pow(a, k):
        result = [1] + [0] * (n - 1)
        base = list(a)
        while k:
            if k & 1:
                result = _poly_mul_mod(result, base, modulus, p)
            base = _poly_mul_mod(base, base, modulus, p)
            k >>= 1
        return result

    one = [1] + [0] * (n - 1)
    for cand in range(2, q):
        a = idx_to_poly(cand)
        if all(poly_pow(a, (q - 1) // f) != one for f in factors):
            return cand
    raise RuntimeError("no multiplicative generator found")


def build_field(p: int, n: int, max_q: int = DEFAULT_MAX_Q) -> FieldCtx:
    """Construct the arithmetic context for F_{p^n}.

    Raises CompositeP unless p is an odd prime, BudgetExceeded when p**n
    exceeds the table budget.
    """
    if not isinstance(p, int) or not isinstance(n, int) or n < 1:
        raise CompositeP(f"need odd prime p and n >= 1, got p={p}, n={n}")
    if not is_odd_prime(p):
        raise CompositeP(f"p must be an odd prime, got {p}")
    q = p**n
    if q > max_q:
        raise BudgetExceeded(f"q = {q} exceeds budget {max_q}")

    modulus = smallest_irreducible(p, n)
    params = FieldParams(p=p, n=n, modulus=modulus)

    pows = p ** np.arange(n, dtype=np.int64)
    digits = (np.arange(q, dtype=np.int64)[:, None] // pows[None, :]) % p

    # discrete-log core
    g = _find_generator(p, n, modulus, q)
    exp = np.empty(q - 1, dtype=np.int64)
    log = np.full(q, -1, dtype=np.int64)
    cur = [1] + [0] * (n - 1)
    gpoly = [(g // p**r) % p for r in range(n)]
    for k in range(q - 1):
        idx = int(sum(c * p**r for r, c in enumerate(cur)))
        exp[k] = idx
        log[idx] = k
        cur = _poly_mul_mod(cur, gpoly, modulus, p)

    inverse = np.zeros(q, dtype=np.int64)
    inverse[exp] = exp[(-log[exp]) % (q - 1)]

    # trace via Frobenius orbits: tr(x) = x + x^p + ... + x^{p^{n-1}}
    xs = np.arange(q, dtype=np.int64)
    acc = digits.copy()
    frob = xs.copy()
    for _ in range(n - 1):
        nz = frob != 0
        frob[nz] = exp[(log[frob[nz]] * p) % (q - 1)]
        acc = (acc + digits[frob]) % p
    if n > 1 and np.any(acc[:, 1:]):
        raise RuntimeError("trace landed outside the prime subfield")
    trace = acc[:, 0].astype(np.int64)

    sqrt_m1 = None
    if q % 4 == 1:
        minus_one = int(exp[(q - 1) // 2])
        roots = [x for x in range(q)
                 if x and int(exp[(2 * log[x]) % (q - 1)]) == minus_one]
        sqrt_m1 = min(roots)

    zeta = np.exp(2j * np.pi * np.arange(p) / p)

    digits.setflags(write=False)
    exp.setflags(write=False)
    log.setflags(write=False)
    trace.setflags(write=False)
    inverse.setflags(write=False)
    zeta.setflags(write=False)
    return FieldCtx(params=params, digits=digits, exp=exp, log=log,
                    trace=trace, inverse=inverse, sqrt_minus_one=sqrt_m1,
                    zeta=zeta)


@lru_cache(maxsize=32)
def get_field(p: int, n: int) -> FieldCtx:
    return build_field(p, n)


def field_for_q(q: int) -> FieldCtx:
    """Resolve q = p^n with p an odd prime and return the cached context."""
    if q < 3:
        raise CompositeP(f"q must be an odd prime power >= 3, got {q}")
    p = q
    f = 3
    while f * f <= p:
        if p % f == 0:
            p = f
            break
        f += 2
    n = round(math.log(q, p))
    if p**n != q or not is_odd_prime(p):
        raise CompositeP(f"q = {q} is not an odd prime power")
    return get_field(p, n)


def sqrt_of_minus_one(ctx: FieldCtx):
    """Smallest-index omega with omega^2 = -1; None unless q = 1 mod 4."""
    return ctx.sqrt_minus_one


def trace(ctx: FieldCtx, x: int) -> int:
    return int(ctx.trace[x])


def char_value(ctx: FieldCtx, a: int, x: int) -> complex:
    return ctx.char_value(a, x)


def require_nonprincipal(ctx: FieldCtx, a: int) -> None:
    if a % ctx.q == 0:
        raise PrincipalCharacter("character parameter a must be nonzero")
