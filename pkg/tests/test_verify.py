"""Certificate producers: census, identity checks, the inequality chain,
functional equation, and extremizer classification."""

import numpy as np
import pytest

from fqcone.certificates import all_passed
from fqcone.cone import get_cone
from fqcone.errors import NonUnimodular
from fqcone.verify import (ChainData, ExtremizerFit, NotExtremal,
                           census_check, chain_check, chain_equality_check,
                           classification_roundtrip_check, classify_extremizer,
                           corollary_bridge_check, duality_check,
                           functional_eq_check, geometry_checks,
                           mixed_product_identity_check, model_22_check,
                           plane_classification_check, plane_feq_deviation,
                           plane_character_values, classify_plane_function,
                           sharpness_check, sigma_pairs_check, verify_all)
from fqcone.xform import (INT, UNIT, ConeFunction, character_function,
                          constant_function, random_even_nonneg,
                          random_unimodular, sharp_constants)


@pytest.mark.parametrize("q", [3, 5, 7])
def test_census_check(q):
    certs = census_check(q)
    assert all_passed(certs)
    if q == 3:
        closed = [c for c in certs if c.claim_id == "census-closed-form"][0]
        assert closed.observed == {"zero": [32], "cone": [13], "generic": [12]}
        assert closed.metadata["region_sizes"] == {"zero": 1, "cone": 32,
                                                   "generic": 48}
    if q == 5:
        closed = [c for c in certs if c.claim_id == "census-closed-form"][0]
        assert closed.observed["cone"] == [43]


def test_geometry_and_models():
    for q in (3, 5):
        assert all_passed(geometry_checks(q, seed=0))
        assert model_22_check(q).passed
        assert sigma_pairs_check(q).passed
    assert all_passed(corollary_bridge_check(5, trials=5, seed=0))


@pytest.mark.parametrize("q", [3, 5, 7])
def test_mixed_product_identity(q):
    assert all_passed(mixed_product_identity_check(q, trials=25, seed=3))


def test_sharpness(cone3):
    certs = sharpness_check(3, trials=10, seed=0)
    assert all_passed(certs)
    exact = [c for c in certs if c.claim_id == "sharp-constant-exact-identity"][0]
    assert exact.metadata["quartic"] == 13344
    assert exact.observed == 13344 * 32
    assert exact.expected == 417 * 32**2


def test_duality_certs():
    assert all_passed(duality_check(3, trials=10, seed=1))


# -- chain ------------------------------------------------------------------------

def test_chain_all_pass_q3_q5():
    for q in (3, 5):
        certs = chain_check(q, trials=40, seed=0)
        assert all_passed(certs), [c.claim_id for c in certs if not c.passed]


def test_chain_equality_exact():
    for q in (3, 5, 7):
        assert chain_equality_check(q).passed


def test_chain_decomposition_identity_exact(cone3, rng):
    """The per-plane split plus the mixed-term remainder tiles the reduced
    estimate exactly for integer inputs."""
    sc = sharp_constants(3)
    g = rng.integers(0, 6, cone3.size).astype(np.int64)
    g = np.minimum(g, g[cone3.neg_perm])  # make it even, stay integral
    ch = ChainData(cone3, ConeFunction(INT, g))
    raw, stage1, bound = ch.mixed_terms(sc.M)
    total = sum(ch.all_plane_s(sc.M)) + raw - bound
    assert ch.main_lhs(sc.M) == total


def test_plane_constant_input_gives_zero_s_exact(cone5, rng):
    """S vanishes exactly on a plane where f is constant, and is strictly
    negative on planes where it is not."""
    sc = sharp_constants(5)
    g = rng.integers(1, 9, cone5.size).astype(np.int64)
    g[cone5.planes_plus[2]] = 4
    ch = ChainData(cone5, ConeFunction(INT, g))
    svals = {(sign, i): ch.plane_s_value(sign, i, sc.M)
             for sign in ("+", "-") for i in range(6)}
    assert svals[("+", 2)] == 0
    for key, v in svals.items():
        if key != ("+", 2):
            assert v < 0
        assert v <= 0


def test_plane_s_locality(cone5, rng):
    """S of a plane depends only on the values on that plane."""
    sc = sharp_constants(5)
    g1 = rng.integers(0, 9, cone5.size).astype(np.int64)
    g2 = g1.copy()
    outside = np.setdiff1d(np.arange(cone5.size), cone5.planes_plus[1])
    g2[outside] = rng.integers(0, 9, len(outside))
    s1 = ChainData(cone5, ConeFunction(INT, g1)).plane_s_value("+", 1, sc.M)
    s2 = ChainData(cone5, ConeFunction(INT, g2)).plane_s_value("+", 1, sc.M)
    assert s1 == s2


def test_chain_strict_slack_for_nonconstant(cone3, rng):
    sc = sharp_constants(3)
    f = random_even_nonneg(cone3, rng)
    ch = ChainData(cone3, f)
    svals = ch.all_plane_s(sc.M)
    assert all(v <= 1e-12 for v in svals)
    assert min(svals) < 0


# -- functional equation ---------------------------------------------------------

def test_functional_eq_characters(cone3):
    assert functional_eq_check(
        cone3, character_function(cone3, (2, 1, 0, 0), mode=UNIT)).passed
    assert functional_eq_check(
        cone3, character_function(cone3, (2, 1, 0, 0))).passed
    assert functional_eq_check(cone3, constant_function(cone3)).passed


def test_functional_eq_flip_counterexample(cone3):
    flip = character_function(cone3, (1, 2, 0, 1)).values.copy()
    flip[5] = -flip[5]
    cert = functional_eq_check(cone3, flip)
    assert not cert.passed
    assert abs(cert.observed - 2.0) < 1e-9


def test_functional_eq_requires_unimodular(cone3, rng):
    with pytest.raises(NonUnimodular):
        functional_eq_check(cone3, 2.0 * constant_function(cone3).values)


def test_functional_eq_sampled(cone5):
    cert = functional_eq_check(
        cone5, character_function(cone5, (1, 1, 1, 1)), exhaustive=False,
        seed=4, samples=60)
    assert cert.passed and cert.metadata["targets"] == 60


# -- plane classification ----------------------------------------------------------

@pytest.mark.parametrize("q", [3, 5])
def test_plane_classification(q):
    assert all_passed(plane_classification_check(q, trials=30, seed=0))


def test_plane_classifier_roundtrip_specifics():
    from fqcone.gf import get_field
    f5 = get_field(5, 1)
    psi = plane_character_values(f5, 1, 2, lam=1j)
    a1, a2, lam, res = classify_plane_function(f5, psi)
    assert (a1, a2) == (1, 2)
    assert abs(lam - 1j) < 1e-12 and res < 1e-12
    # constant function is the trivial character
    ones = np.ones(24, dtype=complex)
    assert classify_plane_function(f5, ones)[:2] == (0, 0)
    # mixed-sign doubling: sign flips break the functional equation
    bad = psi.copy()
    bad[7] = -bad[7]
    assert plane_feq_deviation(f5, bad) > 1.0


# -- extremizer classification -----------------------------------------------------

def test_classify_roundtrip(cone5):
    fit = classify_extremizer(cone5, character_function(cone5, (1, 2, 3, 4),
                                                        lam=2.5))
    assert isinstance(fit, ExtremizerFit)
    assert fit.a == (1, 2, 3, 4)
    assert abs(fit.lam - 2.5) < 1e-9 and fit.residual < 1e-9


def test_classify_constant(cone3):
    fit = classify_extremizer(cone3, constant_function(cone3))
    assert isinstance(fit, ExtremizerFit)
    assert fit.a == (0, 0, 0, 0) and abs(fit.lam - 1) < 1e-12


def test_classify_exact_unit(cone3):
    fit = classify_extremizer(cone3,
                              character_function(cone3, (2, 2, 1, 0), mode=UNIT))
    assert isinstance(fit, ExtremizerFit)
    assert fit.residual == 0.0 and fit.a == (2, 2, 1, 0)


def test_classify_rejections(cone3, rng):
    bumped = character_function(cone3, (1, 0, 0, 0)).values.copy()
    bumped[0] += 1e-3
    verdict = classify_extremizer(cone3, bumped, tol=1e-6)
    assert isinstance(verdict, NotExtremal)
    assert verdict.reason == "nonconstant-modulus"
    noise = random_unimodular(cone3, rng)
    verdict = classify_extremizer(cone3, noise)
    assert isinstance(verdict, NotExtremal)
    assert verdict.reason in ("plane-fit-failed", "global-psi-nonconstant")


def test_classify_q22_model_coordinates():
    """Classification reports parameters in the model's own coordinates."""
    from fqcone.cone import ConeModel
    cc = get_cone(5, ConeModel.QUADRATIC_22)
    fit = classify_extremizer(cc, character_function(cc, (2, 0, 1, 3), lam=1.5))
    assert isinstance(fit, ExtremizerFit)
    assert fit.a == (2, 0, 1, 3)
    assert abs(fit.lam - 1.5) < 1e-9


@pytest.mark.parametrize("q", [3, 5])
def test_classification_roundtrip_check(q):
    assert all_passed(classification_roundtrip_check(q, seed=0))


# -- orchestration -----------------------------------------------------------------

def test_verify_all_float_q3():
    certs = verify_all(3, trials=15, seed=0, mode="float")
    assert all_passed(certs)
    ids = [c.claim_id for c in certs]
    assert ids == sorted(ids)
    assert "chain-equality-at-constant" in ids
    assert "duality-parseval-random" in ids


def test_verify_all_exact_q3():
    certs = verify_all(3, trials=10, seed=0, mode="exact")
    assert all_passed(certs)
    assert all(c.mode == "exact" for c in certs)
