"""Low-level numerical kernels.

Log-factorials, signed log-space accumulation of alternating series and
equal-spaced quadrature of trigonometric polynomials over one period.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import DomainError

EXACT_TABLE_SIZE = 2000


def _build_table(size: int) -> tuple[float, ...]:
    out = [0.0]
    fact = 1
    for n in range(1, size + 1):
        fact *= n
        out.append(math.log(fact))
    return tuple(out)


# Built once at import; math.log handles arbitrarily large ints correctly.
_LOG_FACTORIALS = _build_table(EXACT_TABLE_SIZE)


def _stirling_log_factorial(n: int) -> float:
    x = float(n)
    inv = 1.0 / x
    inv2 = inv * inv
    series = inv * (1 / 12 - inv2 * (1 / 360 - inv2 * (1 / 1260 - inv2 / 1680)))
    return x * math.log(x) - x + 0.5 * math.log(2 * math.pi * x) + series


def log_factorial(n: int) -> float:
    """Return ln(n!).

    Exact-integer based for ``n <= 2000``; Stirling series above.
    """
    n = int(n)
    if n < 0:
        raise DomainError(f"log_factorial needs n >= 0, got {n}")
    if n <= EXACT_TABLE_SIZE:
        return _LOG_FACTORIALS[n]
    return _stirling_log_factorial(n)


@dataclass(frozen=True)
class SignedLogValue:
    """A real number stored as ``sign * exp(log_magnitude)``.

    ``sign == 0`` is an exact zero whatever ``log_magnitude`` holds.
    """

    sign: int
    log_magnitude: float = 0.0

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise DomainError(f"sign must be -1, 0 or +1, got {self.sign}")

    @classmethod
    def from_real(cls, x: float) -> "SignedLogValue":
        if x == 0:
            return ZERO
        return cls(1 if x > 0 else -1, math.log(abs(x)))

    @property
    def is_zero(self) -> bool:
        return self.sign == 0

    def to_real(self) -> float:
        if self.sign == 0:
            return 0.0
        return self.sign * math.exp(self.log_magnitude)

    def __mul__(self, other: "SignedLogValue") -> "SignedLogValue":
        if self.sign == 0 or other.sign == 0:
            return ZERO
        return SignedLogValue(self.sign * other.sign, self.log_magnitude + other.log_magnitude)

    def __pow__(self, k: int) -> "SignedLogValue":
        if k < 0:
            raise DomainError("negative powers are not supported")
        if k == 0:
            return ONE
        if self.sign == 0:
            return ZERO
        sign = -1 if (self.sign < 0 and k % 2) else 1
        return SignedLogValue(sign, k * self.log_magnitude)

    def __neg__(self) -> "SignedLogValue":
        return SignedLogValue(-self.sign, self.log_magnitude)


ZERO = SignedLogValue(0, 0.0)
ONE = SignedLogValue(1, 0.0)


def inv_factorial_or_zero(n: int) -> SignedLogValue:
    """1/n! as a SignedLogValue, exactly zero at negative integers (poles of Gamma)."""
    if n < 0:
        return ZERO
    return SignedLogValue(1, -log_factorial(n))


def signed_log_sum(terms: Iterable[SignedLogValue]) -> float:
    """Sum signed log-space terms without overflow.

    Terms are rescaled by the largest magnitude, summed with ``math.fsum``
    (exactly rounded, built on error-free transformations) and scaled back.
    """
    live = [t for t in terms if t.sign != 0]
    if not live:
        return 0.0
    top = max(t.log_magnitude for t in live)
    total = math.fsum(t.sign * math.exp(t.log_magnitude - top) for t in live)
    if total == 0.0:
        return 0.0
    try:
        return total * math.exp(top)
    except OverflowError:
        return math.copysign(math.exp(top + math.log(abs(total))), total)


def trapezoid_nodes(degree_bound: int) -> np.ndarray:
    """Nodes of the periodic trapezoid rule that is exact up to ``degree_bound``."""
    if degree_bound < 0:
        raise DomainError(f"degree_bound must be >= 0, got {degree_bound}")
    m = 2 * degree_bound + 3
    return -np.pi + 2 * np.pi * np.arange(m) / m


def periodic_trapezoid(f: Callable[[np.ndarray], np.ndarray], degree_bound: int) -> complex:
    """Return (1/2pi) * integral of ``f`` over one period.

    ``f`` is called once with the array of nodes and must return an array of
    the same shape. The result is exact up to rounding when ``f`` is a
    trigonometric polynomial of degree ``<= degree_bound``.
    """
    nodes = trapezoid_nodes(degree_bound)
    values = np.asarray(f(nodes), dtype=complex)
    return complex(values.mean())


def periodic_trapezoid_nd(
    f: Callable[..., np.ndarray], degree_bounds: Sequence[int]
) -> complex:
    """Tensor-product version of :func:`periodic_trapezoid`.

    ``f`` receives one broadcastable node array per variable (``ij`` indexing).
    """
    grids = np.meshgrid(*(trapezoid_nodes(d) for d in degree_bounds), indexing="ij", sparse=True)
    values = np.asarray(f(*grids), dtype=complex)
    values = np.broadcast_to(values, np.broadcast_shapes(*(g.shape for g in grids)))
    return complex(values.mean())
