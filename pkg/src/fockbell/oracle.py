"""Brute-force reference: expand the source monomial in detector creation operators.

Uses no quadrature and none of the closed-form sums. The source operators are
rewritten as a_alpha^dag = sum_i u_i a_i^dag and a_beta^dag = sum_i v_i a_i^dag
(conjugate transpose of the orthonormal map columns), then
(a_alpha^dag)^Na (a_beta^dag)^Nb is expanded with exact multinomial factors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, SizeGuardError
from .fock import FockPair, ModeMap, OutcomeDistribution, compositions, validate_mode_map

MAX_PARTICLES = 12


def _multinomial(counts) -> int:
    out = math.factorial(sum(counts))
    for k in counts:
        out //= math.factorial(k)
    return out


def _factorial_product(counts) -> int:
    return math.prod(math.factorial(k) for k in counts)


@dataclass(frozen=True)
class OperatorPolynomial:
    """Coefficients of detector creation-operator monomials, keyed by occupation tuple."""

    terms: dict
    n_particles: int


def _power_terms(n: int, coeffs) -> dict:
    """(sum_i c_i x_i)^n as {exponent tuple: coefficient}."""
    out = {}
    for ks in compositions(n, len(coeffs)):
        c = complex(_multinomial(ks))
        for ci, k in zip(coeffs, ks):
            if k:
                c *= ci**k
        out[ks] = c
    return out


def expand_state(src: FockPair, mode_map: ModeMap) -> OperatorPolynomial:
    """Expand (a_alpha^dag)^Na (a_beta^dag)^Nb through ``mode_map``."""
    if src.total() > MAX_PARTICLES:
        raise SizeGuardError(f"oracle refuses N = {src.total()} > {MAX_PARTICLES}")
    if not validate_mode_map(mode_map).passed:
        raise DomainError("mode map columns are not orthonormal")
    alpha = _power_terms(src.n_alpha, [c[0] for c in mode_map.coefficients])
    beta = _power_terms(src.n_beta, [c[1] for c in mode_map.coefficients])
    terms = {}
    for ka, ca in alpha.items():
        for kb, cb in beta.items():
            key = tuple(a + b for a, b in zip(ka, kb))
            terms[key] = terms.get(key, 0j) + ca * cb
    return OperatorPolynomial(terms=terms, n_particles=src.total())


def amplitude_from_expansion(poly: OperatorPolynomial, src: FockPair, counts) -> complex:
    norm = math.sqrt(_factorial_product(counts) / (math.factorial(src.n_alpha) * math.factorial(src.n_beta)))
    return poly.terms.get(tuple(counts), 0j) * norm


def distribution_from_expansion(poly: OperatorPolynomial, src: FockPair) -> OutcomeDistribution:
    """P(m) = |coef(m)|^2 * prod(m_i!) / (Na! Nb!)."""
    if poly.n_particles != src.total():
        raise DomainError("polynomial and source disagree on the particle number")
    denom = math.factorial(src.n_alpha) * math.factorial(src.n_beta)
    return OutcomeDistribution(
        {key: abs(c) ** 2 * _factorial_product(key) / denom for key, c in poly.terms.items()}
    )


def parity_from_expansion(poly: OperatorPolynomial, src: FockPair, parity_detectors=()) -> float:
    """Average of (-1)^(sum of m_i over ``parity_detectors``), detectors labelled from 1."""
    if not parity_detectors:
        return 1.0
    return distribution_from_expansion(poly, src).parity(sorted(parity_detectors))
