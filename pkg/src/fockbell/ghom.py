"""Generalized Hong-Ou-Mandel interference at a beam splitter of arbitrary transmittivity."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import ConsistencyError, DomainError
from .fock import (
    CLAMP_TOLERANCE,
    FockPair,
    OutcomeDistribution,
    Splitter,
    as_splitter,
    check_counts,
    clamp_probability,
)
from .numerics import (
    ONE,
    SignedLogValue,
    inv_factorial_or_zero,
    log_factorial,
    periodic_trapezoid,
    signed_log_sum,
    trapezoid_nodes,
)

PARITY_TOLERANCE = 1e-12
ROUNDING_SAFETY = 16


@dataclass(frozen=True)
class ParityValue:
    value: float

    def __post_init__(self):
        if abs(self.value) > 1 + PARITY_TOLERANCE:
            raise ConsistencyError(f"parity {self.value} outside [-1, 1]")

    def __float__(self):
        return self.value


def _as_pair(src) -> FockPair:
    return src if isinstance(src, FockPair) else FockPair(*src)


def _saddle_log_radius(slope, target: float, bound: float = 50.0) -> float:
    """Root in s = ln(rho) of ``slope(s) == target`` for an increasing ``slope``.

    The coefficient a contour integral extracts does not depend on the contour
    radius; at this radius the integrand is smallest relative to that
    coefficient, so rounding no longer scales with the worst-case 2^N.
    """
    g = lambda x: slope(x) - target
    if g(-bound) >= 0:
        return -bound
    if g(bound) <= 0:
        return bound
    return brentq(g, -bound, bound, xtol=1e-6)


def _amplitude_integral(src: FockPair, s: Splitter, m1: int, m2: int) -> complex:
    t = math.sqrt(s.transmittivity)
    r = math.sqrt(s.reflectivity)
    k = src.n_alpha

    def slope(x):
        rho = math.exp(x)
        return m1 * t * rho / (t * rho + r) + m2 * r * rho / (r * rho + t)

    x = _saddle_log_radius(slope, k)
    rho = math.exp(x)
    n1, n2 = t * rho + r, r * rho + t

    def integrand(phi):
        z = rho * np.exp(1j * phi)
        return np.exp(-1j * k * phi) * ((t * z + 1j * r) / n1) ** m1 * ((1j * r * z + t) / n2) ** m2

    log_scale = (
        0.5 * (log_factorial(src.n_alpha) + log_factorial(src.n_beta) - log_factorial(m1) - log_factorial(m2))
        + m1 * math.log(n1) + m2 * math.log(n2) - k * x
    )
    return math.exp(log_scale) * periodic_trapezoid(integrand, m1 + m2)


def _amplitude_sum(src: FockPair, s: Splitter, m1: int, m2: int) -> complex:
    t = math.sqrt(s.transmittivity)
    ir = 1j * math.sqrt(s.reflectivity)
    total = 0j
    for p in range(max(0, src.n_alpha - m2), min(m1, src.n_alpha) + 1):
        q = src.n_alpha - p
        total += math.comb(m1, p) * math.comb(m2, q) * t ** (p + m2 - q) * ir ** (q + m1 - p)
    scale = 0.5 * (log_factorial(src.n_alpha) + log_factorial(src.n_beta) - log_factorial(m1) - log_factorial(m2))
    return math.exp(scale) * total


def amplitude(src, s, out: Sequence[int], method: str = "integral") -> complex:
    """Amplitude C_{m1 m2} for finding ``out = (m1, m2)`` behind the splitter.

    ``method`` is ``"integral"`` (single phase integral, default) or ``"sum"``
    (the double sum over how many alpha particles reach each detector).
    """
    src, s = _as_pair(src), as_splitter(s)
    m1, m2 = check_counts(out, src.total(), modes=2)
    if method == "integral":
        return _amplitude_integral(src, s, m1, m2)
    if method == "sum":
        return _amplitude_sum(src, s, m1, m2)
    raise DomainError(f"unknown amplitude method {method!r}")


def _probabilities_double_integral(src: FockPair, s: Splitter) -> np.ndarray:
    n = src.total()
    diff = src.n_alpha - src.n_beta
    t, r = s.transmittivity, s.reflectivity
    c = 2 * math.sqrt(t * r)
    cos_lam = np.cos(trapezoid_nodes(n))[:, None]
    big = trapezoid_nodes(n + abs(diff))[None, :]
    unit = np.exp(1j * big)
    phase = np.exp(-1j * diff * big)
    lf = log_factorial(src.n_alpha) + log_factorial(src.n_beta)
    probs = np.empty(n + 1)
    for m1 in range(n + 1):
        m2 = n - m1

        def slope(x):
            rho = math.exp(x)
            up1, dn1 = t * rho, r / rho
            up2, dn2 = r * rho, t / rho
            return m1 * (up1 - dn1) / (up1 + dn1 + c) + m2 * (up2 - dn2) / (up2 + dn2 + c)

        x = _saddle_log_radius(slope, diff)
        rho = math.exp(x)
        w = rho * unit
        a1 = t * rho + r / rho + c
        a2 = r * rho + t / rho + c
        values = phase * ((t * w + r / w - c * cos_lam) / a1) ** m1 * ((r * w + t / w + c * cos_lam) / a2) ** m2
        log_scale = lf - log_factorial(m1) - log_factorial(m2) + m1 * math.log(a1) + m2 * math.log(a2) - diff * x
        scale = math.exp(log_scale)
        p = scale * float(np.mean(values).real)
        # |values| <= 1 after normalization, so rounding is bounded by the scale
        noise = ROUNDING_SAFETY * np.finfo(float).eps * (n + 1) * scale
        probs[m1] = clamp_probability(p, max(noise, CLAMP_TOLERANCE), (m1, m2))
    return probs


def outcome_distribution(src, s, method: str = "double_integral") -> OutcomeDistribution:
    """Distribution of (m1, N - m1) for m1 = 0..N.

    ``"double_integral"`` integrates the probability directly over the two
    angles; ``"amplitude"`` squares the single-integral amplitudes.
    """
    src, s = _as_pair(src), as_splitter(s)
    n = src.total()
    if method == "double_integral":
        probs = _probabilities_double_integral(src, s)
    elif method == "amplitude":
        probs = np.array([abs(_amplitude_integral(src, s, m1, n - m1)) ** 2 for m1 in range(n + 1)])
    else:
        raise DomainError(f"unknown distribution method {method!r}")
    return OutcomeDistribution({(m1, n - m1): probs[m1] for m1 in range(n + 1)})


def _parity_terms(src: FockPair, s: Splitter):
    n = src.total()
    diff = src.n_alpha - src.n_beta
    t, r = s.transmittivity, s.reflectivity
    lead = SignedLogValue(1, n * math.log(2) + log_factorial(src.n_alpha) + log_factorial(src.n_beta))
    r_minus_t = SignedLogValue.from_real(r - t)
    root = SignedLogValue.from_real(math.sqrt(t * r))
    for p in range(n + 1):
        # parity guards first: half-integer factorial arguments never occur
        if (n - p) % 2 or (diff + p) % 2:
            continue
        up, down = (diff + p) // 2, (p - diff) // 2
        sign = ONE if down % 2 == 0 else -ONE
        yield (
            lead
            * sign
            * r_minus_t**p
            * root ** (n - p)
            * SignedLogValue(1, -p * math.log(2))
            * inv_factorial_or_zero((n - p) // 2) ** 2
            * inv_factorial_or_zero(up)
            * inv_factorial_or_zero(down)
        )


def parity_average(src, s, method: str = "series") -> ParityValue:
    """Average detector-1 parity sum_{m1} (-1)^m1 P(m1, N - m1).

    ``"series"`` evaluates the closed-form finite sum in signed log space;
    ``"distribution"`` sums the outcome distribution directly.
    """
    src, s = _as_pair(src), as_splitter(s)
    if method == "series":
        value = signed_log_sum(_parity_terms(src, s))
    elif method == "distribution":
        value = outcome_distribution(src, s).parity([1])
    else:
        raise DomainError(f"unknown parity method {method!r}")
    return ParityValue(value)


def parity_scan(src, t_grid) -> np.ndarray:
    """Rows (T, parity) in the order of ``t_grid``."""
    src = _as_pair(src)
    grid = [float(t) for t in t_grid]
    bad = [t for t in grid if not 0.0 <= t <= 1.0]
    if bad:
        raise DomainError(f"transmittivities outside [0, 1]: {bad}")
    return np.array([(t, parity_average(src, Splitter(t)).value) for t in grid]).reshape(-1, 2)


def parity_extrema(src, steps: int = 201) -> tuple[float, float]:
    """Locations (T_min, T_max) of the deepest interior parity minimum and highest interior maximum.

    Endpoints are excluded: at T = 0 or 1 the parity is trivially +-1. A scan
    brackets each extremum, then golden-section search refines it.
    """
    src = _as_pair(src)
    table = parity_scan(src, np.linspace(0.0, 1.0, steps))
    values = table[:, 1]
    inner = np.arange(1, steps - 1)
    is_min = (values[inner] <= values[inner - 1]) & (values[inner] <= values[inner + 1])
    is_max = (values[inner] >= values[inner - 1]) & (values[inner] >= values[inner + 1])
    if not is_min.any() or not is_max.any():
        raise DomainError("parity has no interior extremum on this grid")

    def refine(i, sign):
        f = lambda t: sign * parity_average(src, Splitter(min(max(t, 0.0), 1.0))).value
        bracket = (table[i - 1, 0], table[i, 0], table[i + 1, 0])
        return float(minimize_scalar(f, bracket=bracket, method="golden", tol=1e-10).x)

    lows, highs = inner[is_min], inner[is_max]
    return (
        refine(int(lows[np.argmin(values[lows])]), 1.0),
        refine(int(highs[np.argmax(values[highs])]), -1.0),
    )


def binomial_source_parity(n_total: int) -> float:
    """Balanced-splitter parity averaged over binomially distributed source splits.

    Equals N!/(2^N (N/2)!^2) for even N and 0 for odd N.
    """
    if n_total < 0:
        raise DomainError(f"n_total must be >= 0, got {n_total}")
    if n_total % 2:
        return 0.0
    half = n_total // 2
    return math.exp(log_factorial(n_total) - n_total * math.log(2) - 2 * log_factorial(half))


def binomial_average_parity(n_total: int, t: float = 0.5) -> float:
    """Direct average of :func:`parity_average` over the binomial source distribution."""
    if n_total < 0:
        raise DomainError(f"n_total must be >= 0, got {n_total}")
    s = Splitter(t)
    return math.fsum(
        math.comb(n_total, k) / 2**n_total * parity_average(FockPair(k, n_total - k), s).value
        for k in range(n_total + 1)
    )


def sanaka_check(n: int) -> tuple[float, float]:
    """Return R = n/(n+1) and P(1, n) for sources (n, 1) at that reflectivity."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    r = n / (n + 1)
    s = Splitter(1.0 - r)
    p = abs(amplitude(FockPair(n, 1), s, (1, n))) ** 2
    return r, p
