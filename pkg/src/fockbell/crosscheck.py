"""Oracle-equivalence suite: quadrature and closed forms against brute-force expansion."""

from __future__ import annotations

from . import oracle
from .bell import joint_distribution, parity_correlator
from .errors import SizeGuardError
from .fock import FockPair, bell_mode_map, ghom_mode_map
from .ghom import outcome_distribution

GHOM_TRANSMITTIVITIES = (0.0, 0.25, 0.5, 0.66, 1.0)
BELL_SETTINGS = ((0.57, 0.43), (0.06, 0.94), (0.5, 0.5), (0.2, 0.7), (0.486, 0.504))
THRESHOLD = 1e-12


def _max_gap(a, b) -> float:
    keys = set(a) | set(b)
    return max((abs(a.get(k, 0.0) - b.get(k, 0.0)) for k in keys), default=0.0)


def oracle_suite(max_n: int, threshold: float = THRESHOLD) -> dict:
    """Worst residual per comparison class.

    GHOM pairs use N_alpha, N_beta <= max_n (total capped by the oracle guard);
    Bell cases use every even N <= max_n.
    """
    if not 0 <= max_n <= oracle.MAX_PARTICLES:
        raise SizeGuardError(f"max_n must lie in 0..{oracle.MAX_PARTICLES}, got {max_n}")
    ghom = 0.0
    cases = 0
    for na in range(max_n + 1):
        for nb in range(max_n + 1):
            if na + nb > oracle.MAX_PARTICLES:
                continue
            src = FockPair(na, nb)
            for t in GHOM_TRANSMITTIVITIES:
                ref = oracle.distribution_from_expansion(oracle.expand_state(src, ghom_mode_map(t)), src)
                ghom = max(ghom, _max_gap(dict(outcome_distribution(src, t)), dict(ref)))
                cases += 1
    joint = parity = 0.0
    bell_cases = 0
    for n in range(2, max_n + 1, 2):
        src = FockPair(n // 2, n // 2)
        for t1, t2 in BELL_SETTINGS:
            poly = oracle.expand_state(src, bell_mode_map(t1, t2))
            ref = oracle.distribution_from_expansion(poly, src)
            joint = max(joint, _max_gap(dict(joint_distribution(n, t1, t2)), dict(ref)))
            parity = max(parity, abs(ref.parity([2, 4]) - parity_correlator(n, t1, t2)))
            bell_cases += 1
    classes = {
        "ghom_distribution": {"cases": cases, "max_residual": ghom},
        "bell_joint_probability": {"cases": bell_cases, "max_residual": joint},
        "bell_parity_correlator": {"cases": bell_cases, "max_residual": parity},
    }
    for c in classes.values():
        c["threshold"] = threshold
        c["passed"] = c["max_residual"] <= threshold
    return {"passed": all(c["passed"] for c in classes.values()), "classes": classes}
