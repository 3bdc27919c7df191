"""Unnormalized state vectors over the (internal state x cavity) basis.

A basis vector ``|s>|i>`` is an atom with internal state ``s`` sitting in
cavity ``i``.  Internal state 0 plays the role of ``|A>``, 1 of ``|B>`` and
so on; cavity 0 is the central cavity of the star-shaped device.

Nothing here normalizes.  A state such as ``sqrt(3)|A,0> + sqrt(2)|B,0>`` is
a perfectly good value and keeps its norm of ``sqrt(5)`` through every
operation.
"""

from __future__ import annotations

import math
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

import numpy as np

DEFAULT_PRUNE = 1e-15


class BasisLabel(NamedTuple):
    internal: int
    cavity: int


class StateVector:
    """Sparse map from :class:`BasisLabel` to complex amplitude.

    Absent labels have amplitude zero.  Entries whose magnitude falls below
    ``prune`` are dropped at construction.  Instances are treated as
    immutable values; every operation returns a new state.

    >>> v = StateVector(3, 2, {(0, 0): 3 ** 0.5, (1, 0): 2 ** 0.5})
    >>> round(norm(v) ** 2, 12)
    5.0
    >>> v[1, 2]
    0j
    """

    __slots__ = ("cavities", "internals", "prune", "_amps")

    def __init__(
        self,
        cavities: int,
        internals: int,
        amplitudes: Mapping[tuple[int, int], complex] | None = None,
        prune: float = DEFAULT_PRUNE,
    ):
        if cavities < 1:
            raise ValueError(f"need at least one cavity, got {cavities}")
        if internals < 1:
            raise ValueError(f"need at least one internal state, got {internals}")
        if prune < 0:
            raise ValueError(f"prune threshold must be nonnegative, got {prune}")
        self.cavities = int(cavities)
        self.internals = int(internals)
        self.prune = prune
        amps: dict[BasisLabel, complex] = {}
        for key, value in (amplitudes or {}).items():
            label = self._check(key)
            value = complex(value)
            if not (math.isfinite(value.real) and math.isfinite(value.imag)):
                raise ValueError(f"non-finite amplitude {value!r} at {tuple(label)}")
            if abs(value) >= prune and value != 0:
                amps[label] = value
        self._amps = amps

    @classmethod
    def from_weights(
        cls, weights: Sequence[int], cavities: int | None = None, scale: complex = 1.0
    ) -> "StateVector":
        """Return ``scale * sum_s sqrt(n_s) |s,0>`` for integer weights ``n_s``."""
        if cavities is None:
            cavities = sum(weights) + 1
        amps = {(s, 0): scale * math.sqrt(n) for s, n in enumerate(weights)}
        return cls(cavities, len(weights), amps)

    @classmethod
    def _trusted(cls, like: "StateVector", amps: dict) -> "StateVector":
        # labels already validated; only pruning is reapplied
        out = cls.__new__(cls)
        out.cavities, out.internals, out.prune = like.cavities, like.internals, like.prune
        cut = like.prune
        out._amps = {k: v for k, v in amps.items() if v != 0 and abs(v) >= cut}
        return out

    def _check(self, key) -> BasisLabel:
        s, i = key
        if not 0 <= s < self.internals:
            raise IndexError(f"internal index {s} outside 0..{self.internals - 1}")
        if not 0 <= i < self.cavities:
            raise IndexError(f"cavity index {i} outside 0..{self.cavities - 1}")
        return BasisLabel(int(s), int(i))

    def check_cavity(self, i: int) -> int:
        if not 0 <= i < self.cavities:
            raise IndexError(f"cavity index {i} outside 0..{self.cavities - 1}")
        return i

    @property
    def amplitudes(self) -> Mapping[BasisLabel, complex]:
        return MappingProxyType(self._amps)

    def __getitem__(self, key) -> complex:
        return self._amps.get(self._check(key), 0j)

    def __iter__(self) -> Iterator[BasisLabel]:
        return iter(sorted(self._amps))

    def __len__(self) -> int:
        return len(self._amps)

    def items(self) -> list[tuple[BasisLabel, complex]]:
        """Stored entries sorted by ``(internal, cavity)``."""
        return sorted(self._amps.items())

    def updated(self, changes: Mapping[tuple[int, int], complex]) -> "StateVector":
        """Copy of this state with the given entries overwritten."""
        amps = dict(self._amps)
        for key, value in changes.items():
            value = complex(value)
            if not (math.isfinite(value.real) and math.isfinite(value.imag)):
                raise ValueError(f"non-finite amplitude {value!r} at {tuple(key)}")
            amps[self._check(key)] = value
        return StateVector._trusted(self, amps)

    def same_shape(self, other: "StateVector") -> bool:
        return self.cavities == other.cavities and self.internals == other.internals

    def _combine(self, other: "StateVector", sign: int) -> "StateVector":
        if not self.same_shape(other):
            raise ValueError("state vectors live on different devices")
        amps = dict(self._amps)
        for label, value in other._amps.items():
            amps[label] = amps.get(label, 0j) + sign * value
        return StateVector._trusted(self, amps)

    def __add__(self, other: "StateVector") -> "StateVector":
        return self._combine(other, 1)

    def __sub__(self, other: "StateVector") -> "StateVector":
        return self._combine(other, -1)

    def __mul__(self, scalar: complex) -> "StateVector":
        scalar = complex(scalar)
        amps = {label: scalar * value for label, value in self._amps.items()}
        return StateVector._trusted(self, amps)

    __rmul__ = __mul__

    def __neg__(self) -> "StateVector":
        return self * -1

    def __eq__(self, other) -> bool:
        if not isinstance(other, StateVector):
            return NotImplemented
        return self.same_shape(other) and self._amps == other._amps

    __hash__ = None  # type: ignore[assignment]

    def max_difference(self, other: "StateVector") -> float:
        """Largest entrywise amplitude difference ``|self - other|``."""
        if not self.same_shape(other):
            raise ValueError("state vectors live on different devices")
        labels = self._amps.keys() | other._amps.keys()
        return max((abs(self._amps.get(k, 0j) - other._amps.get(k, 0j)) for k in labels), default=0.0)

    def allclose(self, other: "StateVector", tol: float = 1e-12) -> bool:
        return self.max_difference(other) <= tol

    def to_dense(self) -> np.ndarray:
        """Dense ``(internals, cavities)`` complex array."""
        out = np.zeros((self.internals, self.cavities), dtype=complex)
        for (s, i), value in self._amps.items():
            out[s, i] = value
        return out

    def cavity_magnitude(self, i: int) -> float:
        """Euclidean magnitude of everything stored in cavity ``i``."""
        self.check_cavity(i)
        return math.sqrt(sum(abs(self._amps.get((s, i), 0j)) ** 2 for s in range(self.internals)))

    def __repr__(self) -> str:
        terms = " + ".join(f"({v:.6g})|{s},{i}>" for (s, i), v in self.items())
        return f"StateVector(C={self.cavities}, K={self.internals}: {terms or '0'})"


def norm(state: StateVector) -> float:
    """``sqrt(sum |amplitude|^2)``.  Used to watch conservation, never to rescale."""
    return math.hypot(*(abs(v) for v in state.amplitudes.values()))


def swap_cavities(state: StateVector, i: int, j: int) -> StateVector:
    """Exchange the contents of cavities ``i`` and ``j`` for every internal state."""
    state.check_cavity(i)
    state.check_cavity(j)
    if i == j:
        return state
    swap = {i: j, j: i}
    amps = {BasisLabel(s, swap.get(c, c)): v for (s, c), v in state.amplitudes.items()}
    return StateVector._trusted(state, amps)


def amplitude_dispersion(state: StateVector, cavities: Iterable[int]) -> float:
    """Spread ``max - min`` of the per-cavity magnitudes over ``cavities``.

    Zero exactly when the listed cavities all carry the same amount of
    amplitude.  Phases are ignored.
    """
    cavities = list(cavities)
    if not cavities:
        raise ValueError("amplitude_dispersion needs at least one cavity")
    mags = [state.cavity_magnitude(i) for i in cavities]
    return max(mags) - min(mags)
