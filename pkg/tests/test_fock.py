import math

import numpy as np
import pytest

from fockbell.errors import ConsistencyError, DomainError
from fockbell.fock import (
    FockPair,
    ModeMap,
    OutcomeDistribution,
    Splitter,
    bell_mode_map,
    check_counts,
    compositions,
    ghom_mode_map,
    validate_mode_map,
)

GRID = np.linspace(0.0, 1.0, 101)


def test_fock_pair():
    assert FockPair(3, 4).total() == 7
    with pytest.raises(DomainError):
        FockPair(-1, 2)


def test_splitter_range():
    assert Splitter(0.25).reflectivity == 0.75
    for bad in (-0.1, 1.1, float("nan")):
        with pytest.raises(DomainError):
            Splitter(bad)


def test_ghom_map_limits():
    assert ghom_mode_map(1.0).coefficients == ((1, 0), (0, 1))
    assert ghom_mode_map(0.0).coefficients == ((0, 1j), (1j, 0))
    half = ghom_mode_map(0.5)
    assert np.allclose(np.abs(half.u), 1 / math.sqrt(2))
    assert np.allclose(np.abs(half.v), 1 / math.sqrt(2))
    assert validate_mode_map(half).overlap < 1e-16


def test_bell_map_coefficients():
    m = bell_mode_map(0.5, 0.5)
    assert np.allclose(np.abs(m.u), 0.5) and np.allclose(np.abs(m.v), 0.5)
    m = bell_mode_map(1.0, 0.0)
    assert m.coefficients[1][0] == 0
    assert validate_mode_map(m).passed
    t1, t2 = 0.57, 0.43
    h = 1 / math.sqrt(2)
    expected = (
        (1j * h * math.sqrt(t1), 1j * h * math.sqrt(1 - t1)),
        (-h * math.sqrt(1 - t1), h * math.sqrt(t1)),
        (1j * h * math.sqrt(1 - t2), 1j * h * math.sqrt(t2)),
        (h * math.sqrt(t2), -h * math.sqrt(1 - t2)),
    )
    assert bell_mode_map(t1, t2).coefficients == expected
    assert validate_mode_map(bell_mode_map(t1, t2)).max_residual < 1e-15


def test_validation_report():
    assert validate_mode_map(ghom_mode_map(0.3)).passed
    bad = validate_mode_map(ModeMap(((1, 1), (0, 0))))
    assert bad.normalized and not bad.orthogonal and not bad.passed
    assert validate_mode_map(bell_mode_map(0.06, 0.94)).passed


@pytest.mark.parametrize("t", GRID)
def test_constructors_unitary_on_grid(t):
    assert validate_mode_map(ghom_mode_map(t)).max_residual < 1e-14
    assert validate_mode_map(bell_mode_map(t, 1 - t)).max_residual < 1e-14
    assert validate_mode_map(bell_mode_map(t, t)).max_residual < 1e-14


@pytest.mark.parametrize("t", GRID)
def test_ghom_complement_exchanges_labels(t):
    # swapping either the detector rows or the source columns of M(1-T)
    # gives i * conj(M(T)) coefficient by coefficient
    a = np.array(ghom_mode_map(t).coefficients)
    b = np.array(ghom_mode_map(1 - t).coefficients)
    assert np.allclose(b[::-1, :], 1j * np.conj(a), rtol=0, atol=1e-15)
    assert np.allclose(b[:, ::-1], 1j * np.conj(a), rtol=0, atol=1e-15)


def test_counts_and_compositions():
    assert check_counts([1, 2], 3) == (1, 2)
    with pytest.raises(DomainError):
        check_counts([1, 1], 3)
    with pytest.raises(DomainError):
        check_counts([-1, 4], 3)
    assert len(list(compositions(2, 4))) == 10
    assert len(list(compositions(8, 4))) == math.comb(11, 3)


def test_distribution_clamp_and_parity():
    d = OutcomeDistribution({(0, 1): 1.0, (1, 0): -5e-15})
    assert d[(1, 0)] == 0.0
    assert d.is_normalized()
    assert d.parity([1]) == 1.0
    assert d.parity([2]) == -1.0
    with pytest.raises(ConsistencyError):
        OutcomeDistribution({(0, 1): 1.0, (1, 0): -1e-9})
