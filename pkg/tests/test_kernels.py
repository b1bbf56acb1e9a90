"""The numba and numpy kernel backends must agree bitwise-closely."""

import numpy as np
import pytest

from fqcone import _kernels_numpy as knp
from fqcone.cone import get_cone

try:
    from fqcone import _kernels_numba as knb
    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False

pytestmark = pytest.mark.skipif(not HAS_NUMBA, reason="numba not installed")


@pytest.fixture(scope="module")
def setup():
    cc = get_cone(5)
    rng = np.random.default_rng(0)
    f = rng.uniform(-1, 1, cc.size) + 1j * rng.uniform(-1, 1, cc.size)
    g = rng.uniform(-1, 1, cc.size) + 1j * rng.uniform(-1, 1, cc.size)
    fi = rng.integers(-9, 10, cc.size).astype(np.int64)
    gi = rng.integers(-9, 10, cc.size).astype(np.int64)
    add = cc.fctx.dense_add_table()
    return cc, f, g, fi, gi, add


def test_pair_table_complex(setup):
    cc, f, g, _, _, add = setup
    a = knb.pair_table_complex(cc.coords, f, g, add, cc.q)
    b = knp.pair_table_complex(cc.coords, f, g, add, cc.q)
    assert np.allclose(a, b, rtol=1e-12, atol=1e-12)


def test_pair_table_int(setup):
    cc, _, _, fi, gi, add = setup
    assert np.array_equal(knb.pair_table_int(cc.coords, fi, gi, add, cc.q),
                          knp.pair_table_int(cc.coords, fi, gi, add, cc.q))


def test_pair_count(setup):
    cc, *_, add = setup
    assert np.array_equal(knb.pair_count(cc.coords, add, cc.q),
                          knp.pair_count(cc.coords, add, cc.q))


def test_pair_exponent_hist(setup):
    cc, *_, add = setup
    e = np.random.default_rng(1).integers(0, cc.fctx.p, cc.size)
    a = knb.pair_exponent_hist(cc.coords, e, add, cc.fctx.p, cc.q)
    b = knp.pair_exponent_hist(cc.coords, e, add, cc.fctx.p, cc.q)
    assert np.array_equal(a, b)


def test_gradient_eval(setup):
    cc, f, _, _, _, add = setup
    ftab = knb.pair_table_complex(cc.coords, f, f, add, cc.q)
    a = knb.gradient_eval(cc.coords, f, ftab, add, cc.q)
    b = knp.gradient_eval(cc.coords, f, ftab, add, cc.q)
    assert np.allclose(a, b, rtol=1e-12, atol=1e-12)


def test_extension_table(setup):
    cc, f, *_ = setup
    fctx = cc.fctx
    mul = fctx.dense_mul_table()
    args = (cc.coords, f, np.ascontiguousarray(mul[2]).astype(np.int32), mul,
            fctx.dense_add_table(), fctx.trace.astype(np.int64), fctx.zeta, cc.q)
    assert np.allclose(knb.extension_table(*args), knp.extension_table(*args),
                       rtol=1e-10, atol=1e-12)


def test_backend_selection_env(monkeypatch):
    import importlib
    import fqcone.kernels as K
    monkeypatch.setenv("FQCONE_BACKEND", "numpy")
    mod = importlib.reload(K)
    assert mod.BACKEND == "numpy"
    monkeypatch.delenv("FQCONE_BACKEND")
    mod = importlib.reload(K)
    assert mod.BACKEND in ("numba", "numpy")
