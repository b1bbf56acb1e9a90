import numpy as np
import pytest

from fqcone.cone import get_cone
from fqcone.gf import get_field


@pytest.fixture(scope="session")
def f3():
    return get_field(3, 1)


@pytest.fixture(scope="session")
def f9():
    return get_field(3, 2)


@pytest.fixture(scope="session")
def cone3():
    return get_cone(3)


@pytest.fixture(scope="session")
def cone5():
    return get_cone(5)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# ---------------------------------------------------------------------------
# Independent brute-force oracle at q = 3 (plain modular ints, no package
# arithmetic): cone points, pair counts, and the quartic census value.
# ---------------------------------------------------------------------------

@pytest.fixture(scope="session")
def brute_q3():
    q = 3
    pts = [(a, b, c, d)
           for a in range(q) for b in range(q) for c in range(q) for d in range(q)
           if (a, b, c, d) != (0, 0, 0, 0) and (a * b - c * d) % q == 0]
    counts = {}
    for p1 in pts:
        for p2 in pts:
            s = tuple((x + y) % q for x, y in zip(p1, p2))
            counts[s] = counts.get(s, 0) + 1
    onc = set(pts)
    def region(t):
        if t == (0, 0, 0, 0):
            return "zero"
        return "cone" if t in onc else "generic"
    return {"points": pts, "counts": counts, "region": region,
            "quartic_constant": sum(v * v for v in counts.values())}
