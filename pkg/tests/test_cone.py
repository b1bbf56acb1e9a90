"""Cone geometry: enumeration, Segre coordinates, counting, planes."""

import numpy as np
import pytest

from fqcone.cone import (ConeCtx, ConeModel, add_points,
                         change_vars_22_to_product, change_vars_product_to_22,
                         get_cone, map_31_to_product, map_product_to_31,
                         matrix_31_to_product, matrix_to_product, on_cone,
                         point_coords, point_index, segre, segre_inverse,
                         sub_points)
from fqcone.errors import ModelUnavailable, NotOnCone
from fqcone.gf import get_field


@pytest.mark.parametrize("q", [3, 5, 7, 9])
def test_cardinality_and_membership_scan(q):
    cc = get_cone(q)
    assert cc.size == (q - 1) * (q + 1) ** 2
    # independent oracle: full predicate scan over F_q^4
    allc = point_coords(q, np.arange(q**4))
    scan = np.flatnonzero(on_cone(cc.fctx, ConeModel.PRODUCT, allc))
    assert np.array_equal(scan, cc.points)


def test_point_index_roundtrip():
    q = 7
    idx = np.arange(q**4)
    assert np.array_equal(point_index(q, point_coords(q, idx)), idx)


def test_brute_force_cone_q3(brute_q3, cone3):
    pts = [tuple(c) for c in cone3.coords.tolist()]
    assert sorted(pts) == sorted(brute_q3["points"])


# -- model equivalences --------------------------------------------------------

@pytest.mark.parametrize("q", [3, 5, 9])
def test_change_vars_22(q):
    from fqcone.gf import field_for_q
    fctx = field_for_q(q)
    allc = point_coords(q, np.arange(q**4))
    fwd = change_vars_22_to_product(fctx, allc)
    assert np.array_equal(change_vars_product_to_22(fctx, fwd), allc)
    assert np.array_equal(on_cone(fctx, ConeModel.QUADRATIC_22, allc),
                          on_cone(fctx, ConeModel.PRODUCT, fwd))
    # fixed example: (1,0,1,0) -> (0,2,0,0), both memberships hold
    img = change_vars_22_to_product(fctx, np.array([1, 0, 1, 0]))
    assert img.tolist() == [0, 2, 0, 0]
    assert on_cone(fctx, ConeModel.QUADRATIC_22, np.array([1, 0, 1, 0]))
    assert on_cone(fctx, ConeModel.PRODUCT, img)
    assert change_vars_22_to_product(fctx, np.zeros(4, int)).tolist() == [0] * 4


def test_map_31_requires_q1mod4():
    with pytest.raises(ModelUnavailable):
        map_31_to_product(get_field(3, 1), np.array([1, 1, 1, 0]))
    with pytest.raises(ModelUnavailable):
        ConeCtx(get_field(7, 1), ConeModel.QUADRATIC_31)


@pytest.mark.parametrize("q", [5, 9, 13])
def test_map_31_bijection(q):
    cc31 = get_cone(q, ConeModel.QUADRATIC_31)
    cc = get_cone(q)
    assert cc31.size == (q - 1) * (q + 1) ** 2
    image = point_index(q, map_31_to_product(cc.fctx, cc31.coords))
    assert np.array_equal(np.sort(image), cc.points)
    back = map_product_to_31(cc.fctx, map_31_to_product(cc.fctx, cc31.coords))
    assert np.array_equal(back, cc31.coords)
    # the recorded matrix realizes the same map
    T = np.array(matrix_31_to_product(cc.fctx))
    fctx = cc.fctx
    x = cc31.coords[17]
    via_matrix = [0, 0, 0, 0]
    for i in range(4):
        acc = 0
        for j in range(4):
            acc = fctx.add(acc, fctx.mul(int(T[i, j]), int(x[j])))
        via_matrix[i] = acc
    assert via_matrix == map_31_to_product(fctx, x).tolist()


def test_membership_preserved_q13_random():
    q = 13
    fctx = get_field(13, 1)
    rng = np.random.default_rng(7)
    pts = rng.integers(0, q, (10_000, 4))
    fwd = map_31_to_product(fctx, pts)
    assert np.array_equal(on_cone(fctx, ConeModel.QUADRATIC_31, pts),
                          on_cone(fctx, ConeModel.PRODUCT, fwd))


def test_matrix_to_product_identity_and_22():
    fctx = get_field(5, 1)
    assert matrix_to_product(fctx, ConeModel.PRODUCT) == [
        [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    V = matrix_to_product(fctx, ConeModel.QUADRATIC_22)
    x = np.array([2, 3, 1, 4])
    via = [0, 0, 0, 0]
    for i in range(4):
        acc = 0
        for j in range(4):
            acc = fctx.add(acc, fctx.mul(V[i][j], int(x[j])))
        via[i] = acc
    assert via == change_vars_22_to_product(fctx, x).tolist()


# -- Segre parametrization ------------------------------------------------------

def test_segre_identities(f3):
    lam = 2
    assert segre(f3, lam, 3, 3).tolist() == [0, lam, 0, 0]      # alpha=beta=inf
    a2 = 2
    assert segre(f3, lam, a2, 3).tolist() == [0, f3.mul(lam, a2), lam, 0]
    assert segre(f3, 1, 0, 0).tolist() == [1, 0, 0, 0]          # alpha=beta=(1,0)


def test_segre_inverse_examples(f3):
    assert segre_inverse(f3, np.array([0, 2, 0, 0])) == (2, 3, 3)
    assert segre_inverse(f3, np.array([1, 0, 0, 0])) == (1, 0, 0)
    with pytest.raises(NotOnCone):
        segre_inverse(f3, np.array([1, 1, 1, 0]))


@pytest.mark.parametrize("q", [3, 5, 7])
def test_segre_roundtrip_exhaustive(q):
    cc = get_cone(q)
    seen = set()
    for o in range(cc.size):
        lam, a, b = segre_inverse(cc.fctx, cc.coords[o])
        assert np.array_equal(segre(cc.fctx, lam, a, b), cc.coords[o])
        seen.add((lam, a, b))
    assert len(seen) == (q - 1) * (q + 1) ** 2


# -- representation counts -------------------------------------------------------

def test_sigma_counts_vs_brute_force(brute_q3, cone3):
    for t, cnt in brute_q3["counts"].items():
        assert cone3.sigma_count(point_index(3, np.array(t))) == cnt
    assert cone3.closed_sigma_count(0) == 32
    on = int(cone3.points[0])
    assert cone3.closed_sigma_count(on) == 13
    # closed forms match everywhere
    for u in range(81):
        assert cone3.sigma_count(u) == cone3.closed_sigma_count(u)


@pytest.mark.parametrize("q", [3, 5, 7, 9, 11, 13])
def test_sigma_closed_forms(q):
    cc = get_cone(q)
    counts = cc.sigma_counts
    cone_mask = np.zeros(q**4, dtype=bool)
    cone_mask[cc.points] = True
    assert counts[0] == (q + 1) ** 2 * (q - 1)
    assert (counts[cone_mask] == 2 * q * q - q - 2).all()
    gen = ~cone_mask
    gen[0] = False
    assert (counts[gen] == q * q + q).all()
    assert int(counts.sum()) == cc.size**2


def test_census_second_moment_q3(brute_q3, cone3):
    total = sum(int(c) ** 2 for c in cone3.sigma_counts.tolist())
    assert total == brute_q3["quartic_constant"] == 13344


def test_sigma_pairs(cone3):
    xi = int(cone3.points[5])
    pairs = cone3.sigma_pairs(xi)
    assert len(pairs) == cone3.sigma_count(xi) == 13
    for a, b in pairs:
        assert cone3.contains(a) and cone3.contains(b)
        assert add_points(cone3.fctx, a, b) == xi


# -- incidence sets and planes ----------------------------------------------------

def test_h_set_sizes_q5(cone5):
    # brute-force count of the incidence set at q=5 gives 44 = (q-1)(2q+1)
    q = 5
    hs = cone5.h_set(int(cone5.points[11]))
    union = hs["line"] | hs["h_plus"] | hs["h_minus"]
    assert len(hs["line"]) == q - 1
    assert len(hs["h_plus"]) == len(hs["h_minus"]) == q * (q - 1)
    assert len(union) == (q - 1) * (2 * q + 1) == 44
    # disjointness
    assert not (hs["line"] & hs["h_plus"]) and not (hs["line"] & hs["h_minus"])
    assert not (hs["h_plus"] & hs["h_minus"])


def test_h_set_is_membership_condition(cone3):
    # eta in H_xi  <=>  xi - eta satisfies the product relation
    fctx = cone3.fctx
    for xi in cone3.points.tolist()[:8]:
        hs = cone3.h_set(xi)
        union = hs["line"] | hs["h_plus"] | hs["h_minus"]
        for eta in cone3.points.tolist():
            d = point_coords(3, sub_points(fctx, xi, eta))
            pred = fctx.mul(int(d[0]), int(d[1])) == fctx.mul(int(d[2]), int(d[3]))
            assert (eta in union) == pred


def test_xi_in_own_line(cone3):
    xi = int(cone3.points[9])
    assert xi in cone3.h_set(xi)["line"]


def test_h_plus_symmetry_exhaustive_q3(cone3):
    sets = {p: cone3.h_set(p) for p in cone3.points.tolist()}
    for xi, hx in sets.items():
        for eta in hx["h_plus"]:
            assert xi in sets[eta]["h_plus"]
        for eta in hx["h_minus"]:
            assert xi in sets[eta]["h_minus"]


def test_planes_partition_q3(cone3):
    plus, minus = cone3.planes()
    assert len(plus) == len(minus) == 4
    assert all(len(a) == 8 for a in plus + minus)
    assert sorted(np.concatenate(plus).tolist()) == list(range(32))
    assert sorted(np.concatenate(minus).tolist()) == list(range(32))


def test_plane_cross_intersection_q5(cone5):
    plus, minus = cone5.planes()
    for i in range(6):
        for j in range(6):
            assert len(np.intersect1d(plus[i], minus[j])) == 4


def test_plane_closure_q3(cone3):
    plus, _ = cone3.planes()
    for sel in plus:
        pts = cone3.points[sel]
        sums = add_points(cone3.fctx, pts[:, None], pts[None, :]).ravel()
        assert np.isin(sums, np.append(pts, 0)).all()


def test_plane_structure_pairs(cone5):
    q = 5
    st = cone5.plane_structure("+", 2)
    assert st["line_pairs"].shape == (q * q - 1, q - 2, 2)
    assert st["h_pairs"].shape == (q * q - 1, q * (q - 1), 2)
    # partners really add back to xi
    fctx = cone5.fctx
    for r in range(0, q * q - 1, 7):
        xi = int(cone5.points[st["ordinals"][r]])
        for eta_o, par_o in st["h_pairs"][r][:5]:
            s = add_points(fctx, int(cone5.points[eta_o]), int(cone5.points[par_o]))
            assert s == xi


def test_region_classification(cone3):
    assert cone3.region(0) == "zero"
    assert cone3.region(int(cone3.points[3])) == "cone"
    assert cone3.region(point_index(3, np.array([1, 1, 1, 0]))) == "generic"


def test_neg_perm(cone5):
    pts = cone5.points
    neg = pts[cone5.neg_perm]
    fctx = cone5.fctx
    assert (add_points(fctx, pts, neg) == 0).all()


def test_q22_model_context():
    cc = get_cone(5, ConeModel.QUADRATIC_22)
    assert cc.size == 144
    allc = point_coords(5, np.arange(5**4))
    scan = np.flatnonzero(on_cone(cc.fctx, ConeModel.QUADRATIC_22, allc))
    assert np.array_equal(scan, cc.points)
    # planes still partition
    plus, minus = cc.planes()
    assert sorted(np.concatenate(plus).tolist()) == list(range(cc.size))
