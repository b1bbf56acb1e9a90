"""Machine-readable verdict records binding one checked claim to a computation."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np


def jsonable(x):
    """Coerce observed/expected payloads to deterministic JSON-safe values."""
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, np.ndarray):
        return [jsonable(v) for v in x.tolist()]
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    return x


@dataclass
class Certificate:
    """Pass/fail record for one claim at one q, reproducible given (q, seed, mode)."""

    claim_id: str
    q: int
    mode: str                  # "exact" or "float"
    observed: object
    expected: object
    passed: bool
    tolerance: float | None = None
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "claim_id": self.claim_id,
            "q": self.q,
            "mode": self.mode,
            "observed": jsonable(self.observed),
            "expected": jsonable(self.expected),
            "tolerance": self.tolerance,
            "passed": bool(self.passed),
            "metadata": jsonable(self.metadata),
        }

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] q={self.q:<3d} {self.mode:<5s} {self.claim_id}"


def exact_cert(claim_id, q, observed, expected, **metadata) -> Certificate:
    return Certificate(claim_id=claim_id, q=q, mode="exact",
                       observed=observed, expected=expected,
                       passed=(observed == expected), tolerance=None,
                       metadata=metadata)


def float_cert(claim_id, q, observed, expected, tol, scale=1.0, **metadata) -> Certificate:
    gap = abs(observed - expected)
    return Certificate(claim_id=claim_id, q=q, mode="float",
                       observed=observed, expected=expected,
                       passed=bool(gap <= tol * max(1.0, abs(scale))),
                       tolerance=tol, metadata=metadata)


def bound_cert(claim_id, q, observed, bound, tol, scale=1.0, mode="float", **metadata) -> Certificate:
    """Pass iff observed <= bound + tol * scale (one-sided inequality)."""
    return Certificate(claim_id=claim_id, q=q, mode=mode,
                       observed=observed, expected=f"<= {jsonable(bound)}",
                       passed=bool(observed <= bound + tol * max(1.0, abs(scale))),
                       tolerance=tol, metadata=metadata)


def sort_certificates(certs) -> list:
    return sorted(certs, key=lambda c: c.claim_id)


def certificates_json(certs, indent=2) -> str:
    return json.dumps([c.to_dict() for c in certs], indent=indent, sort_keys=True)


def all_passed(certs) -> bool:
    return all(c.passed for c in certs)
