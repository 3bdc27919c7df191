import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cavityborn.statevec import StateVector, amplitude_dispersion, norm, swap_cavities

A, B = 0, 1


def uniform(n, cavities=None):
    """sum_{i=1..n} |A,i>"""
    return StateVector(cavities or n + 1, 2, {(A, i): 1.0 for i in range(1, n + 1)})


finite = st.floats(-10, 10, allow_nan=False)
amps = st.builds(complex, finite, finite)


@st.composite
def states(draw, cavities=6, internals=3, prune=1e-15):
    entries = draw(st.dictionaries(st.tuples(st.integers(0, internals - 1), st.integers(0, cavities - 1)), amps, max_size=12))
    return StateVector(cavities, internals, entries, prune)


def test_norm_examples():
    assert norm(StateVector(4, 2)) == 0
    assert norm(StateVector(4, 2, {(A, 0): math.sqrt(3), (B, 0): math.sqrt(2)})) == pytest.approx(math.sqrt(5), abs=1e-15)
    assert norm(uniform(5)) == pytest.approx(math.sqrt(5), abs=1e-15)


def test_unnormalized_states_are_kept_as_given():
    v = StateVector(3, 2, {(A, 0): 7.0})
    assert v[A, 0] == 7.0
    assert norm(v) == 7.0


def test_swap_examples():
    v = uniform(5)
    assert swap_cavities(v, 2, 4) == v
    w = StateVector(3, 1, {(A, 1): 2, (A, 2): 3})
    assert swap_cavities(w, 1, 2) == StateVector(3, 1, {(A, 1): 3, (A, 2): 2})
    assert swap_cavities(w, 1, 1) == w


def test_swap_moves_every_internal_state():
    v = StateVector(3, 2, {(A, 1): 1, (B, 1): 2j, (B, 2): -1})
    assert swap_cavities(v, 1, 2) == StateVector(3, 2, {(A, 2): 1, (B, 2): 2j, (B, 1): -1})


def test_swap_out_of_range():
    with pytest.raises(IndexError):
        swap_cavities(uniform(3), 0, 4)


def test_dispersion_examples():
    assert amplitude_dispersion(uniform(5), range(1, 6)) == 0
    assert amplitude_dispersion(StateVector(3, 1, {(A, 1): 1, (A, 2): 2}), [1, 2]) == 1
    for phi in np.linspace(-3, 3, 7):
        v = StateVector(3, 1, {(A, 1): cmath.exp(1j * phi), (A, 2): 1})
        assert amplitude_dispersion(v, [1, 2]) == pytest.approx(0, abs=1e-15)


def test_dispersion_errors():
    with pytest.raises(ValueError):
        amplitude_dispersion(uniform(2), [])
    with pytest.raises(IndexError):
        amplitude_dispersion(uniform(2), [5])


def test_labels_validated():
    with pytest.raises(IndexError):
        StateVector(3, 2, {(2, 0): 1})
    with pytest.raises(IndexError):
        StateVector(3, 2, {(0, 3): 1})
    with pytest.raises(ValueError):
        StateVector(3, 2, {(0, 0): float("nan")})


def test_prune_threshold():
    v = StateVector(3, 1, {(A, 0): 1e-16, (A, 1): 1.0})
    assert len(v) == 1
    kept = StateVector(3, 1, {(A, 0): 1e-16}, prune=0.0)
    assert kept[A, 0] == 1e-16


def test_dense_view():
    v = StateVector(3, 2, {(B, 2): 1j})
    d = v.to_dense()
    assert d.shape == (2, 3) and d[1, 2] == 1j and np.count_nonzero(d) == 1


@given(states(), st.integers(0, 5), st.integers(0, 5))
def test_swap_involution_and_norm(v, i, j):
    w = swap_cavities(v, i, j)
    assert swap_cavities(w, i, j) == v
    assert norm(w) == norm(v) or math.isclose(norm(w), norm(v), rel_tol=1e-15)


@given(states(prune=0.0), amps)
def test_norm_homogeneous(v, a):
    assert norm(a * v) == pytest.approx(abs(a) * norm(v), rel=1e-12, abs=1e-300)


@given(states(), st.lists(st.floats(-math.pi, math.pi), min_size=6, max_size=6))
def test_dispersion_ignores_cavity_phases(v, phases):
    rotated = StateVector(
        v.cavities, v.internals, {(s, i): a * cmath.exp(1j * phases[i]) for (s, i), a in v.items()}
    )
    assert amplitude_dispersion(rotated, range(6)) == pytest.approx(amplitude_dispersion(v, range(6)), abs=1e-12)
