"""Input validation helpers shared by the public entry points."""

import math
from fractions import Fraction
from numbers import Integral, Real

from .exceptions import DimensionError, DomainError


def check_int(value, name, minimum=None, maximum=None):
    if isinstance(value, bool) or not isinstance(value, Integral):
        raise DomainError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if minimum is not None and value < minimum:
        raise DomainError(f"{name} must be >= {minimum}, got {value}")
    if maximum is not None and value > maximum:
        raise DomainError(f"{name} must be <= {maximum}, got {value}")
    return value


def check_probability(p, name="p"):
    if isinstance(p, bool) or not isinstance(p, Real):
        raise DomainError(f"{name} must be a real number, got {p!r}")
    p = float(p)
    if not (0.0 <= p <= 1.0) or math.isnan(p):
        raise DomainError(f"{name} must lie in [0, 1], got {p}")
    return p


def check_rational(value, name="delta"):
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or not isinstance(value, Real):
        raise DomainError(f"{name} must be a real number, got {value!r}")
    if isinstance(value, Integral):
        return Fraction(int(value))
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value}")
    # decimal reading: 0.1 means 1/10, not the nearest binary double
    return Fraction(repr(float(value)))


def check_vertex_set(members, n):
    """Return ``members`` as a frozenset after range checks."""
    out = frozenset(int(v) for v in members)
    for v in out:
        if not 0 <= v < n:
            raise DomainError(f"vertex {v} outside [0, {n})")
    return out


def check_same_order(n1, n2):
    if n1 != n2:
        raise DimensionError(f"vertex counts differ: {n1} != {n2}")


def check_k(k, n, allow_small=False):
    """Validate a support size; ``allow_small`` admits k in {0, 1}."""
    k = check_int(k, "k", minimum=0 if allow_small else 2)
    if k > n:
        raise DomainError(f"k={k} exceeds n={n}")
    return k
