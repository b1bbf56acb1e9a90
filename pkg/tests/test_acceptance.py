"""Acceptance suite: one test per criterion, each printing a verdict line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines.  Tolerances are fixed here, not calibrated elsewhere.
"""

import time
from fractions import Fraction

import numpy as np

from fqcone.certificates import all_passed
from fqcone.cone import ConeCtx, ConeModel, get_cone, map_31_to_product, point_index
from fqcone.gf import field_for_q
from fqcone.optim import AscentConfig, fit_and_report, maximize
from fqcone.verify import (ChainData, ExtremizerFit, chain_check,
                           chain_equality_check, classify_extremizer,
                           classify_plane_function, plane_character_values,
                           plane_feq_deviation, verify_duality)
from fqcone.xform import (INT, UNIT, ConeFunction, character_function,
                          constant_function, pair_convolution, quartic_lhs,
                          random_complex, ratio, ratio_exact, sharp_constants)

REL_TOL = 1e-9


def report(num, name, detail=""):
    print(f"CRITERION {num:2d} [{name}]: PASS {detail}")


def test_criterion_01_cone_cardinality():
    budgets = {q: (1.0 if q <= 13 else 30.0) for q in (3, 5, 7, 9, 11, 13, 25, 27, 49)}
    times = {}
    for q, budget in budgets.items():
        fctx = field_for_q(q)
        t0 = time.perf_counter()
        cc = ConeCtx(fctx)
        dt = time.perf_counter() - t0
        assert cc.size == (q - 1) * (q + 1) ** 2, q
        assert dt < budget, (q, dt)
        times[q] = round(dt, 3)
    report(1, "cone cardinality", f"times={times}")


def test_criterion_02_sigma_census():
    for q in (3, 5, 7, 9, 11, 13):
        cc = get_cone(q)
        t0 = time.perf_counter()
        counts = pair_convolution(cc, constant_function(cc, INT)).values
        dt = time.perf_counter() - t0
        cone_mask = np.zeros(q**4, dtype=bool)
        cone_mask[cc.points] = True
        gen = ~cone_mask
        gen[0] = False
        assert counts[0] == (q + 1) ** 2 * (q - 1)
        assert (counts[cone_mask] == 2 * q * q - q - 2).all()
        assert (counts[gen] == q * q + q).all()
        if q == 3:
            assert sorted({int(counts[0])} | set(counts[cone_mask]) |
                          set(counts[gen]), reverse=True) == [32, 13, 12]
        if q == 13:
            assert dt < 5.0, dt
    report(2, "sigma census", "q in {3,...,13}, exact")


def test_criterion_03_sharp_constant_exact():
    for q in (3, 5, 7, 9, 11, 13):
        cc = get_cone(q)
        sc = sharp_constants(q)
        quart = quartic_lhs(pair_convolution(cc, constant_function(cc, INT)))
        assert quart * sc.C.denominator == sc.C.numerator * cc.size**2, q
        if q == 3:
            assert quart == 13344
            assert sc.C == Fraction(417, 32)
    report(3, "sharp constant attained by constants", "exact integers")


def test_criterion_04_character_extremality():
    rng = np.random.default_rng(42)
    for q in (3, 5, 7):
        cc = get_cone(q)
        sc = sharp_constants(q)
        for _ in range(10):
            a = rng.integers(0, q, 4)
            lam = complex(rng.uniform(0.2, 3), rng.uniform(-2, 2))
            r = ratio(cc, character_function(cc, a, lam=lam))
            assert abs(r - float(sc.C)) <= REL_TOL * float(sc.C), (q, a)
            assert ratio_exact(cc, character_function(cc, a, mode=UNIT)) == sc.C
    report(4, "character extremality", "10 random (lam, a) per q in {3,5,7}")


def test_criterion_05_upper_bound_never_violated():
    rng = np.random.default_rng(7)
    for q in (3, 5, 7):
        cc = get_cone(q)
        C = float(sharp_constants(q).C)
        for _ in range(1000):
            assert ratio(cc, random_complex(cc, rng)) <= C * (1 + REL_TOL)
        trace = maximize(cc, AscentConfig(restarts=20, max_iters=400, seed=q))
        peak = max(max(r.ratios) for r in trace.restarts)
        assert peak <= C * (1 + REL_TOL), (q, peak)
    report(5, "upper bound never violated", "1000 random f + 20 ascents per q")


def test_criterion_06_optimizer_recovers_extremizers():
    for q in (3, 5):
        cc = get_cone(q)
        C = float(sharp_constants(q).C)
        t0 = time.perf_counter()
        trace = maximize(cc, AscentConfig(restarts=20, max_iters=2000, seed=0))
        good = 0
        for run in trace.restarts:
            if abs(run.ratios[-1] - C) > 1e-6 * C:
                continue
            fv = run.final.copy()
            fv *= np.conj(fv[0]) / abs(fv[0])
            fit = classify_extremizer(cc, fv, tol=1e-4)
            if isinstance(fit, ExtremizerFit) and fit.residual < 1e-4:
                good += 1
        dt = time.perf_counter() - t0
        assert good >= 18, (q, good)
        assert dt < 60.0, (q, dt)
        verdict, _ = fit_and_report(cc, trace)
        assert isinstance(verdict, ExtremizerFit)
    report(6, "optimizer recovers extremizers", ">= 18/20 restarts at q in {3,5}")


def test_criterion_07_mixed_product_identity():
    from fqcone.verify import _mixed_product_sides
    rng = np.random.default_rng(11)
    for q in (3, 5, 7):
        cc = get_cone(q)
        for _ in range(100):
            g = rng.integers(0, 25, cc.size)
            lhs, rhs = _mixed_product_sides(cc, g)
            assert lhs == rhs, q
    report(7, "mixed-product identity", "100 random integer f per q in {3,5,7}")


def test_criterion_08_inequality_chain():
    for q in (3, 5):
        certs = chain_check(q, trials=200, seed=0)
        assert all_passed(certs), [c.claim_id for c in certs if not c.passed]
        assert chain_equality_check(q).passed
        # equality on exactly the planes where f is constant
        cc = get_cone(q)
        sc = sharp_constants(q)
        rng = np.random.default_rng(1)
        g = rng.integers(1, 8, cc.size).astype(np.int64)
        g[cc.planes_plus[1]] = 3
        ch = ChainData(cc, ConeFunction(INT, g))
        for sign in ("+", "-"):
            for i in range(q + 1):
                s = ch.plane_s_value(sign, i, sc.M)
                if sign == "+" and i == 1:
                    assert s == 0
                else:
                    assert s < 0
    report(8, "inequality chain", "200 random even nonneg f per q in {3,5}")


def test_criterion_09_duality_factor():
    rng = np.random.default_rng(23)
    for q in (3, 5, 7):
        cc = get_cone(q)
        for _ in range(100):
            cert = verify_duality(cc, random_complex(cc, rng), tol=REL_TOL)
            assert cert.passed, q
    report(9, "duality factor", "100 random f per q in {3,5,7}")


def test_criterion_10_corollary_bridge():
    rng = np.random.default_rng(31)
    for q in (5, 9, 13):
        cc31 = get_cone(q, ConeModel.QUADRATIC_31)
        cc = get_cone(q)
        image = point_index(q, map_31_to_product(cc.fctx, cc31.coords))
        assert len(np.unique(image)) == cc31.size
        assert np.array_equal(np.sort(image), cc.points)
        sc = sharp_constants(q)
        for _ in range(10):
            a = rng.integers(0, q, 4)
            r = ratio(cc31, character_function(cc31, a))
            assert abs(r - float(sc.C)) <= REL_TOL * float(sc.C), (q, a)
    report(10, "(3,1)-model bridge", "bijection + character ratio, q in {5,9,13}")


def test_criterion_11_plane_classification():
    rng = np.random.default_rng(17)
    for q in (3, 5):
        fctx = field_for_q(q)
        for a1 in range(q):
            for a2 in range(q):
                lam = complex(rng.uniform(0.5, 2), rng.uniform(-1, 1))
                fit = classify_plane_function(
                    fctx, plane_character_values(fctx, a1, a2, lam))
                assert fit is not None and fit[:2] == (a1, a2)
                assert abs(fit[2] - lam) < 1e-9 and fit[3] < 1e-9
        rejected = 0
        for _ in range(100):
            noise = np.exp(2j * np.pi * rng.uniform(0, 1, q * q - 1))
            if classify_plane_function(fctx, noise) is None \
                    and plane_feq_deviation(fctx, noise) > 1e-3:
                rejected += 1
        assert rejected == 100, (q, rejected)
    report(11, "plane classification", "all q^2 parameters + 100 rejections")
