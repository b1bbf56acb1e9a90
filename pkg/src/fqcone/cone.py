"""Geometry of the punctured cone in F_q^4.

Three linearly equivalent models are supported: the product form
eta1*eta2 = eta3*eta4 (the working model), the (2,2) quadratic form
eta1^2 + eta2^2 = eta3^2 + eta4^2, and — when q = 1 mod 4 — the (3,1)
form eta1^2 + eta2^2 + eta3^2 = eta4^2.  A point is stored by its
canonical integer index sum(eta_i * q**(i-1)).

The cone is enumerated through the bijection
(lambda, alpha, beta) -> (l*a1*b1, l*a2*b2, l*a1*b2, l*a2*b1) with
alpha, beta on the projective line; fixing alpha (resp. beta) slices the
cone into q+1 disjoint punctured planes, and fixing both gives the
punctured line through a point.  Those slices drive everything downstream:
representation counts, the incidence sets of a cone point, and the
per-plane decomposition used by the inequality-chain checks.
"""

from __future__ import annotations

from enum import Enum
from functools import cached_property, lru_cache

import numpy as np

from .errors import ModelUnavailable, NotOnCone
from .gf import FieldCtx, field_for_q, get_field

INFINITY = -1  # sentinel for the projective point (0, 1) before encoding


class ConeModel(str, Enum):
    PRODUCT = "product"
    QUADRATIC_22 = "q22"
    QUADRATIC_31 = "q31"


# ---------------------------------------------------------------------------
# Point4 index helpers
# ---------------------------------------------------------------------------

def point_index(q: int, coords) -> int | np.ndarray:
    c = np.asarray(coords, dtype=np.int64)
    idx = c[..., 0] + q * c[..., 1] + q * q * c[..., 2] + q**3 * c[..., 3]
    return idx if idx.ndim else int(idx)


def point_coords(q: int, idx) -> np.ndarray:
    i = np.asarray(idx, dtype=np.int64)
    return np.stack([i % q, (i // q) % q, (i // q**2) % q, i // q**3], axis=-1)


def negate_points(fctx: FieldCtx, idx):
    return point_index(fctx.q, fctx.neg(point_coords(fctx.q, idx)))


def add_points(fctx: FieldCtx, i, j):
    return point_index(fctx.q, fctx.add(point_coords(fctx.q, i), point_coords(fctx.q, j)))


def sub_points(fctx: FieldCtx, i, j):
    return point_index(fctx.q, fctx.sub(point_coords(fctx.q, i), point_coords(fctx.q, j)))


# ---------------------------------------------------------------------------
# Membership predicates (vectorized over coordinate arrays)
# ---------------------------------------------------------------------------

def on_cone(fctx: FieldCtx, model: ConeModel, coords) -> np.ndarray | bool:
    """Membership in the punctured cone of the given model."""
    c = np.asarray(coords)
    sq = lambda k: fctx.mul(c[..., k], c[..., k])
    if model == ConeModel.PRODUCT:
        match = fctx.mul(c[..., 0], c[..., 1]) == fctx.mul(c[..., 2], c[..., 3])
    elif model == ConeModel.QUADRATIC_22:
        match = fctx.add(sq(0), sq(1)) == fctx.add(sq(2), sq(3))
    else:
        match = fctx.add(fctx.add(sq(0), sq(1)), sq(2)) == sq(3)
    nonzero = np.asarray(c != 0).any(axis=-1)
    out = np.logical_and(match, nonzero)
    return out if out.ndim else bool(out)


# ---------------------------------------------------------------------------
# Linear model equivalences
# ---------------------------------------------------------------------------

def change_vars_22_to_product(fctx: FieldCtx, coords) -> np.ndarray:
    """(e1,e2,e3,e4) -> (e1-e3, e1+e3, e4-e2, e4+e2); carries (2,2) onto product."""
    c = np.asarray(coords)
    return np.stack([fctx.sub(c[..., 0], c[..., 2]), fctx.add(c[..., 0], c[..., 2]),
                     fctx.sub(c[..., 3], c[..., 1]), fctx.add(c[..., 3], c[..., 1])],
                    axis=-1)


def change_vars_product_to_22(fctx: FieldCtx, coords) -> np.ndarray:
    c = np.asarray(coords)
    inv2 = fctx.inv(2)  # index 2 is the prime-subfield element 2; p is odd
    h = lambda x: fctx.mul(x, inv2)
    return np.stack([h(fctx.add(c[..., 0], c[..., 1])), h(fctx.sub(c[..., 3], c[..., 2])),
                     h(fctx.sub(c[..., 1], c[..., 0])), h(fctx.add(c[..., 2], c[..., 3]))],
                    axis=-1)


def _require_omega(fctx: FieldCtx) -> int:
    if fctx.sqrt_minus_one is None:
        raise ModelUnavailable(
            f"the (3,1) model is equivalent to the product cone only when "
            f"q = 1 mod 4; q = {fctx.q} = 3 mod 4")
    return fctx.sqrt_minus_one


def matrix_31_to_product(fctx: FieldCtx) -> list[list[int]]:
    """Row-major matrix of the linear bijection (3,1)-cone -> product cone."""
    w = _require_omega(fctx)
    one, mone = 1, fctx.neg(1)
    return [[one, 0, 0, mone],
            [one, 0, 0, one],
            [0, mone, w, 0],
            [0, one, w, 0]]


def matrix_to_product(fctx: FieldCtx, model: ConeModel) -> list[list[int]]:
    """Row-major matrix of the linear map carrying a model onto the product cone."""
    model = ConeModel(model)
    if model == ConeModel.PRODUCT:
        return [[1 if i == j else 0 for j in range(4)] for i in range(4)]
    if model == ConeModel.QUADRATIC_22:
        mone = fctx.neg(1)
        return [[1, 0, mone, 0], [1, 0, 1, 0], [0, mone, 0, 1], [0, 1, 0, 1]]
    return matrix_31_to_product(fctx)


def map_31_to_product(fctx: FieldCtx, coords) -> np.ndarray:
    w = _require_omega(fctx)
    c = np.asarray(coords)
    we3 = fctx.mul(w, c[..., 2])
    return np.stack([fctx.sub(c[..., 0], c[..., 3]), fctx.add(c[..., 0], c[..., 3]),
                     fctx.sub(we3, c[..., 1]), fctx.add(c[..., 1], we3)], axis=-1)


def map_product_to_31(fctx: FieldCtx, coords) -> np.ndarray:
    w = _require_omega(fctx)
    c = np.asarray(coords)
    inv2 = fctx.inv(2)
    inv2w = fctx.inv(fctx.mul(2, w))
    return np.stack([fctx.mul(fctx.add(c[..., 0], c[..., 1]), inv2),
                     fctx.mul(fctx.sub(c[..., 3], c[..., 2]), inv2),
                     fctx.mul(fctx.add(c[..., 2], c[..., 3]), inv2w),
                     fctx.mul(fctx.sub(c[..., 1], c[..., 0]), inv2)], axis=-1)


_TO_PRODUCT = {
    ConeModel.PRODUCT: lambda fctx, c: np.asarray(c),
    ConeModel.QUADRATIC_22: change_vars_22_to_product,
    ConeModel.QUADRATIC_31: map_31_to_product,
}
_FROM_PRODUCT = {
    ConeModel.PRODUCT: lambda fctx, c: np.asarray(c),
    ConeModel.QUADRATIC_22: change_vars_product_to_22,
    ConeModel.QUADRATIC_31: map_product_to_31,
}


# ---------------------------------------------------------------------------
# Segre parametrization
# ---------------------------------------------------------------------------

def proj_pair(fctx: FieldCtx, code: int) -> tuple[int, int]:
    """Decode a projective-line code in [0, q] to the normalized pair."""
    return (0, 1) if code == fctx.q else (1, code)


def segre(fctx: FieldCtx, lam: int, alpha: int, beta: int) -> np.ndarray:
    """Product-cone point for (lambda, alpha, beta); alpha/beta are P^1 codes."""
    a1, a2 = proj_pair(fctx, alpha)
    b1, b2 = proj_pair(fctx, beta)
    return np.array([fctx.mul(lam, fctx.mul(a1, b1)),
                     fctx.mul(lam, fctx.mul(a2, b2)),
                     fctx.mul(lam, fctx.mul(a1, b2)),
                     fctx.mul(lam, fctx.mul(a2, b1))], dtype=np.int64)


def segre_inverse(fctx: FieldCtx, coords) -> tuple[int, int, int]:
    """(lambda, alpha, beta) of a product-cone point; raises NotOnCone otherwise."""
    c = np.asarray(coords, dtype=np.int64)
    if not on_cone(fctx, ConeModel.PRODUCT, c):
        raise NotOnCone(f"point {c.tolist()} is not on the product cone")
    e1, e2, e3, e4 = (int(v) for v in c)
    q = fctx.q
    if e1 != 0:
        inv = fctx.inv(e1)
        return e1, fctx.mul(e4, inv), fctx.mul(e3, inv)
    if e3 != 0:  # (0, l*a2, l, 0) with alpha = (1, a2), beta at infinity
        return e3, fctx.mul(e2, fctx.inv(e3)), q
    if e4 != 0:  # (0, l*b2, 0, l) with alpha at infinity, beta = (1, b2)
        return e4, q, fctx.mul(e2, fctx.inv(e4))
    return e2, q, q  # (0, l, 0, 0)


# ---------------------------------------------------------------------------
# Cone context
# ---------------------------------------------------------------------------

class ConeCtx:
    """Immutable enumeration of the cone with its plane/line structure.

    `points` is sorted by canonical index; ordinals refer to positions in
    that order.  The Segre data always describes the product-model image of
    a point, so plane and line slices are meaningful in every model.
    """

    def __init__(self, fctx: FieldCtx, model: ConeModel = ConeModel.PRODUCT):
        model = ConeModel(model)
        if model == ConeModel.QUADRATIC_31:
            _require_omega(fctx)
        self.fctx = fctx
        self.model = model
        q = fctx.q
        self.q = q

        lam = np.arange(1, q, dtype=np.int64)
        proj = np.arange(q + 1, dtype=np.int64)
        L, A, B = (g.ravel() for g in np.meshgrid(lam, proj, proj, indexing="ij"))
        a1 = np.where(A == q, 0, 1)
        a2 = np.where(A == q, 1, A)
        b1 = np.where(B == q, 0, 1)
        b2 = np.where(B == q, 1, B)
        prod_coords = np.stack([fctx.mul(L, fctx.mul(a1, b1)),
                                fctx.mul(L, fctx.mul(a2, b2)),
                                fctx.mul(L, fctx.mul(a1, b2)),
                                fctx.mul(L, fctx.mul(a2, b1))], axis=-1)
        coords = _FROM_PRODUCT[model](fctx, prod_coords)
        idx = point_index(q, coords)
        order = np.argsort(idx, kind="stable")

        self.points = idx[order]
        self.coords = coords[order].astype(np.int64)
        self.size = len(self.points)
        self.seg_lam = L[order]
        self.seg_alpha = A[order]
        self.seg_beta = B[order]

        if len(np.unique(self.points)) != self.size:
            raise RuntimeError("cone enumeration produced duplicate points")

        self.ordinal_of = np.full(q**4, -1, dtype=np.int32)
        self.ordinal_of[self.points] = np.arange(self.size, dtype=np.int32)

        self.planes_plus = [np.flatnonzero(self.seg_alpha == a) for a in range(q + 1)]
        self.planes_minus = [np.flatnonzero(self.seg_beta == b) for b in range(q + 1)]
        line_key = self.seg_alpha * (q + 1) + self.seg_beta
        self.lines = [[None] * (q + 1) for _ in range(q + 1)]
        for key in range((q + 1) * (q + 1)):
            a, b = divmod(key, q + 1)
            self.lines[a][b] = np.flatnonzero(line_key == key)

    # -- basic queries -------------------------------------------------------

    def contains(self, point: int) -> bool:
        return self.ordinal_of[point] >= 0

    def ordinal(self, point: int) -> int:
        o = int(self.ordinal_of[point])
        if o < 0:
            raise NotOnCone(f"point index {point} is not on the cone")
        return o

    def region(self, point: int) -> str:
        if point == 0:
            return "zero"
        return "cone" if self.contains(point) else "generic"

    @cached_property
    def neg_perm(self) -> np.ndarray:
        """Ordinal permutation realizing point negation."""
        return self.ordinal_of[negate_points(self.fctx, self.points)].astype(np.int64)

    @cached_property
    def neg_index(self) -> np.ndarray:
        """Negation on all of F_q^4, as a permutation of point indices."""
        all_idx = np.arange(self.q**4, dtype=np.int64)
        return negate_points(self.fctx, all_idx)

    def to_product(self, coords):
        return _TO_PRODUCT[self.model](self.fctx, coords)

    # -- representation counts -------------------------------------------------

    @cached_property
    def sigma_counts(self) -> np.ndarray:
        """|Sigma_u| for every u in F_q^4, via the ordered pair loop."""
        from .kernels import pair_count
        out = pair_count(self.coords, self.fctx.dense_add_table(), self.q)
        out.setflags(write=False)
        return out

    def closed_sigma_count(self, point: int) -> int:
        q = self.q
        r = self.region(point)
        if r == "zero":
            return (q + 1) ** 2 * (q - 1)
        if r == "cone":
            return 2 * q * q - q - 2
        return q * q + q

    def sigma_count(self, point: int) -> int:
        return int(self.sigma_counts[point])

    def sigma_pairs(self, point: int):
        """Ordered pairs of cone points summing to the given point."""
        partners = sub_points(self.fctx, point, self.points)
        mask = self.ordinal_of[partners] >= 0
        return list(zip(self.points[mask].tolist(), partners[mask].tolist()))

    # -- incidence structure ---------------------------------------------------

    def h_set(self, point: int) -> dict:
        """The line through a cone point and the two punctured half-planes.

        Returned as sets of point indices; their disjoint union is the full
        incidence set of the point.
        """
        o = self.ordinal(point)
        a = int(self.seg_alpha[o])
        b = int(self.seg_beta[o])
        line = self.lines[a][b]
        h_plus = np.setdiff1d(self.planes_plus[a], line, assume_unique=True)
        h_minus = np.setdiff1d(self.planes_minus[b], line, assume_unique=True)
        pts = self.points
        return {"line": set(pts[line].tolist()),
                "h_plus": set(pts[h_plus].tolist()),
                "h_minus": set(pts[h_minus].tolist())}

    def planes(self) -> tuple[list[np.ndarray], list[np.ndarray]]:
        """The two foliations by punctured planes, as ordinal arrays."""
        return self.planes_plus, self.planes_minus

    @lru_cache(maxsize=None)
    def plane_structure(self, sign: str, i: int) -> dict:
        """Pair bookkeeping for one plane, used by the per-plane estimates.

        For each point xi of the plane, rows list the ordinal pairs
        (eta, xi - eta) with eta running over the punctured line through xi
        minus xi itself (`line_pairs`, q-2 rows) and over the plane minus
        the line (`h_pairs`, q(q-1) rows).  Both partners always land back
        in the same plane.
        """
        fctx = self.fctx
        plane = (self.planes_plus if sign == "+" else self.planes_minus)[i]
        key = self.seg_beta if sign == "+" else self.seg_alpha
        local_line = key[plane]  # line label within the plane, in [0, q]
        npts = len(plane)
        q = self.q
        pts = self.points[plane]
        diff = sub_points(fctx, pts[:, None], pts[None, :])
        partner = self.ordinal_of[diff].astype(np.int64)  # (npts, npts) ordinals
        local_of = np.full(self.size, -1, dtype=np.int64)
        local_of[plane] = np.arange(npts)
        same_line = local_line[:, None] == local_line[None, :]
        eye = np.eye(npts, dtype=bool)

        line_pairs = np.empty((npts, q - 2, 2), dtype=np.int64)
        h_pairs = np.empty((npts, q * (q - 1), 2), dtype=np.int64)
        for r in range(npts):
            lsel = np.flatnonzero(same_line[r] & ~eye[r])
            hsel = np.flatnonzero(~same_line[r])
            line_pairs[r, :, 0] = plane[lsel]
            line_pairs[r, :, 1] = partner[r, lsel]
            h_pairs[r, :, 0] = plane[hsel]
            h_pairs[r, :, 1] = partner[r, hsel]
        if (line_pairs < 0).any() or (h_pairs < 0).any():
            raise RuntimeError("plane pair partner fell off the cone")

        lines_local = [plane[local_line == b] for b in range(q + 1)]
        return {"ordinals": plane, "line_label": local_line,
                "lines": lines_local, "line_pairs": line_pairs, "h_pairs": h_pairs}

    def describe(self) -> dict:
        plus, minus = self.planes()
        return {
            "q": self.q,
            "model": self.model.value,
            "cone_size": self.size,
            "plane_sizes": {"plus": [len(a) for a in plus],
                            "minus": [len(a) for a in minus]},
            "census": {"zero": (self.q + 1) ** 2 * (self.q - 1),
                       "on_cone": 2 * self.q**2 - self.q - 2,
                       "generic": self.q**2 + self.q},
        }


@lru_cache(maxsize=16)
def get_cone(q: int, model: ConeModel = ConeModel.PRODUCT) -> ConeCtx:
    return ConeCtx(field_for_q(q), ConeModel(model))


def build_cone(p: int, n: int, model: ConeModel = ConeModel.PRODUCT) -> ConeCtx:
    return ConeCtx(get_field(p, n), ConeModel(model))
