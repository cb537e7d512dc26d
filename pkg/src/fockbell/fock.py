"""Sources, splitters, detector counts and linear mode maps."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

import numpy as np

from .errors import ConsistencyError, DomainError

MAP_TOLERANCE = 1e-12
CLAMP_TOLERANCE = 1e-14
NORMALIZATION_TOLERANCE = 1e-10

OutcomeCounts = tuple[int, ...]


@dataclass(frozen=True)
class FockPair:
    """Occupation numbers of the two source modes."""

    n_alpha: int
    n_beta: int

    def __post_init__(self):
        if self.n_alpha < 0 or self.n_beta < 0:
            raise DomainError(f"occupations must be >= 0, got ({self.n_alpha}, {self.n_beta})")

    def total(self) -> int:
        return self.n_alpha + self.n_beta

    def swapped(self) -> "FockPair":
        return FockPair(self.n_beta, self.n_alpha)


@dataclass(frozen=True)
class Splitter:
    """Beam splitter with transmittivity T; the reflectivity is always 1 - T."""

    transmittivity: float

    def __post_init__(self):
        t = self.transmittivity
        if not (0.0 <= t <= 1.0):
            raise DomainError(f"transmittivity must lie in [0, 1], got {t}")

    @property
    def reflectivity(self) -> float:
        return 1.0 - self.transmittivity


def as_splitter(s: Splitter | float) -> Splitter:
    return s if isinstance(s, Splitter) else Splitter(float(s))


def check_counts(counts: Sequence[int], total: int, modes: int | None = None) -> OutcomeCounts:
    """Validate detector counts against a particle total and return them as a tuple."""
    counts = tuple(int(m) for m in counts)
    if modes is not None and len(counts) != modes:
        raise DomainError(f"expected {modes} detector counts, got {len(counts)}")
    if any(m < 0 for m in counts):
        raise DomainError(f"detector counts must be >= 0, got {counts}")
    if sum(counts) != total:
        raise DomainError(f"detector counts {counts} do not add up to {total} particles")
    return counts


def compositions(total: int, parts: int) -> Iterator[OutcomeCounts]:
    """All tuples of ``parts`` nonnegative integers adding up to ``total``, lexicographic."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


@dataclass(frozen=True)
class ModeMap:
    """Detector operators a_i = u_i a_alpha + v_i a_beta, one (u_i, v_i) pair per detector."""

    coefficients: tuple[tuple[complex, complex], ...]

    def __post_init__(self):
        coeffs = tuple((complex(u), complex(v)) for u, v in self.coefficients)
        if len(coeffs) < 2:
            raise DomainError("a mode map needs at least two detectors")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def modes(self) -> int:
        return len(self.coefficients)

    @property
    def u(self) -> np.ndarray:
        return np.array([c[0] for c in self.coefficients])

    @property
    def v(self) -> np.ndarray:
        return np.array([c[1] for c in self.coefficients])

    def relabeled(self, order: Sequence[int]) -> "ModeMap":
        """Return the map with detectors reordered; ``order`` uses 0-based indices."""
        return ModeMap(tuple(self.coefficients[i] for i in order))


@dataclass(frozen=True)
class ValidationReport:
    norm_alpha: float
    norm_beta: float
    overlap: float
    tolerance: float = MAP_TOLERANCE

    @property
    def normalized(self) -> bool:
        return self.norm_alpha < self.tolerance and self.norm_beta < self.tolerance

    @property
    def orthogonal(self) -> bool:
        return self.overlap < self.tolerance

    @property
    def passed(self) -> bool:
        return self.normalized and self.orthogonal

    @property
    def max_residual(self) -> float:
        return max(self.norm_alpha, self.norm_beta, self.overlap)


def validate_mode_map(m: ModeMap, tolerance: float = MAP_TOLERANCE) -> ValidationReport:
    """Residuals of column normalization and orthogonality for a mode map."""
    u, v = m.u, m.v
    return ValidationReport(
        norm_alpha=abs(float(np.sum(np.abs(u) ** 2)) - 1.0),
        norm_beta=abs(float(np.sum(np.abs(v) ** 2)) - 1.0),
        overlap=float(abs(np.sum(np.conj(u) * v))),
        tolerance=tolerance,
    )


def ghom_mode_map(s: Splitter | float) -> ModeMap:
    """Two-detector map of a single beam splitter.

    a1 = sqrt(T) a_alpha + i sqrt(R) a_beta,  a2 = i sqrt(R) a_alpha + sqrt(T) a_beta.
    """
    s = as_splitter(s)
    t = math.sqrt(s.transmittivity)
    r = math.sqrt(s.reflectivity)
    return ModeMap(((t, 1j * r), (1j * r, t)))


def bell_mode_map(t1: Splitter | float, t2: Splitter | float) -> ModeMap:
    """Four-detector map of the Bell interferometer with both phase shifts set to zero.

    The global prefactors (i, -1) are kept even though no probability depends on them.
    """
    t1, t2 = as_splitter(t1), as_splitter(t2)
    st1, sr1 = math.sqrt(t1.transmittivity), math.sqrt(t1.reflectivity)
    st2, sr2 = math.sqrt(t2.transmittivity), math.sqrt(t2.reflectivity)
    h = 1 / math.sqrt(2)
    return ModeMap(
        (
            (1j * h * st1, 1j * h * sr1),
            (-h * sr1, h * st1),
            (1j * h * sr2, 1j * h * st2),
            (h * st2, -h * sr2),
        )
    )


def clamp_probability(p: float, tolerance: float, key=None) -> float:
    """Map a slightly negative quadrature result to 0; raise if it is too negative to be rounding."""
    if p >= 0.0:
        return p
    if p < -tolerance:
        raise ConsistencyError(f"negative probability {p:.3e} for outcome {key}")
    return 0.0


@dataclass(frozen=True)
class OutcomeDistribution(Mapping):
    """Probabilities of detector outcomes.

    Values in [-1e-14, 0) are clamped to zero; anything more negative raises
    :class:`ConsistencyError`.
    """

    entries: dict = field(default_factory=dict)
    tolerance: float = NORMALIZATION_TOLERANCE

    def __post_init__(self):
        clean = {}
        for key, p in self.entries.items():
            p = float(p)
            if p < 0.0:
                if p < -CLAMP_TOLERANCE:
                    raise ConsistencyError(f"negative probability {p:.3e} for outcome {key}")
                p = 0.0
            clean[tuple(key)] = p
        object.__setattr__(self, "entries", clean)

    def __getitem__(self, key):
        return self.entries[tuple(key)]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def total(self) -> float:
        return math.fsum(self.entries.values())

    def is_normalized(self) -> bool:
        return abs(self.total() - 1.0) <= self.tolerance

    def parity(self, detectors: Sequence[int]) -> float:
        """Average of (-1)^(sum of counts at ``detectors``), 1-based detector labels."""
        idx = [d - 1 for d in detectors]
        return math.fsum(
            p * (-1) ** (sum(counts[i] for i in idx) % 2) for counts, p in self.entries.items()
        )
