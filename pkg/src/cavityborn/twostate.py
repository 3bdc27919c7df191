"""Symmetric two-state channel evolution and the stability analyzer.

When a single channel joins the central cavity 0 to a peripheral cavity i,
exchanging the two cavities is a symmetry of the dynamics, so over a time
step the pair evolves with a matrix of the form ``[[alpha, beta], [beta,
alpha]]``.  Its eigenvectors are ``|0> + |i>`` and ``|0> - |i>`` with
eigenvalues ``alpha + beta`` and ``alpha - beta``.  Requiring that neither
eigenvector shrinks to zero or blows up under repetition pins both
eigenvalues to the unit circle, and that alone makes the matrix unitary.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .statevec import StateVector

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class ChannelParams:
    """Device constants: on-site phase rate ``epsilon`` and hopping rate ``omega``."""

    epsilon: float = 0.0
    omega: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.epsilon) and math.isfinite(self.omega)):
            raise ValueError("channel parameters must be finite")
        if self.omega == 0:
            raise ValueError("omega must be nonzero; no population transfer otherwise")


@dataclass(frozen=True)
class TwoStateMatrix:
    """The symmetric matrix ``[[alpha, beta], [beta, alpha]]``.  Not assumed unitary."""

    alpha: complex
    beta: complex

    def __matmul__(self, other: "TwoStateMatrix") -> "TwoStateMatrix":
        # symmetric circulant 2x2 matrices form a commutative algebra
        a, b = self.alpha, self.beta
        c, d = other.alpha, other.beta
        return TwoStateMatrix(a * c + b * d, a * d + b * c)

    def as_array(self) -> np.ndarray:
        return np.array([[self.alpha, self.beta], [self.beta, self.alpha]], dtype=complex)

    def eigenvalues(self) -> tuple[complex, complex]:
        """Eigenvalues on ``|+> = |0>+|i>`` and ``|-> = |0>-|i>``."""
        return self.alpha + self.beta, self.alpha - self.beta

    def max_difference(self, other: "TwoStateMatrix") -> float:
        return max(abs(self.alpha - other.alpha), abs(self.beta - other.beta))


@dataclass(frozen=True)
class StabilityVerdict:
    stable: bool
    eigenvalue_magnitudes: tuple[float, float]
    unitarity_residuals: tuple[float, float]

    def residuals_within(self, bound: float) -> bool:
        return max(self.unitarity_residuals) <= bound


def unitary_from_params(params: ChannelParams, tau: float) -> TwoStateMatrix:
    """Closed-form channel evolution over a time ``tau``.

    >>> m = unitary_from_params(ChannelParams(0.0, 1.0), math.pi / 2)
    >>> abs(m.alpha) < 1e-15, m.beta
    (True, 1j)
    """
    if not math.isfinite(tau):
        raise ValueError(f"duration must be finite, got {tau}")
    phase = cmath.exp(1j * params.epsilon * tau)
    wt = params.omega * tau
    return TwoStateMatrix(phase * math.cos(wt), 1j * phase * math.sin(wt))


def evolve_channel(
    state: StateVector, channel_cavity: int, selective_internal: int, matrix: TwoStateMatrix
) -> StateVector:
    """Apply ``matrix`` to the pair ``|s,0>, |s,i>`` and leave everything else alone.

    The channel is passable only by internal state ``s``; other internal
    states in cavities 0 and ``i`` do not move.
    """
    if channel_cavity == 0:
        raise ValueError("a channel joins cavity 0 to a peripheral cavity, got cavity 0")
    state.check_cavity(channel_cavity)
    if not 0 <= selective_internal < state.internals:
        raise IndexError(f"internal index {selective_internal} outside 0..{state.internals - 1}")
    alpha, beta = complex(matrix.alpha), complex(matrix.beta)
    if not all(math.isfinite(x) for x in (alpha.real, alpha.imag, beta.real, beta.imag)):
        raise ValueError("channel matrix must be finite")
    s, i = selective_internal, channel_cavity
    center, side = state[s, 0], state[s, i]
    return state.updated({(s, 0): alpha * center + beta * side, (s, i): beta * center + alpha * side})


def stability_verdict(matrix: TwoStateMatrix, tol: float = DEFAULT_TOL) -> StabilityVerdict:
    """Classify a symmetric two-state step by the fate of its stationary states.

    Repeating the step ``t`` times scales ``|+>`` by ``(alpha+beta)**t`` and
    ``|->`` by ``(alpha-beta)**t``; neither tends to zero for ``t -> +-inf``
    iff both magnitudes equal one.  The residuals of ``|alpha|^2+|beta|^2 = 1``
    and ``alpha*conj(beta) + conj(alpha)*beta = 0`` are reported alongside.

    >>> stability_verdict(TwoStateMatrix(0.5, 0.5)).stable
    False
    """
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    alpha, beta = complex(matrix.alpha), complex(matrix.beta)
    plus, minus = abs(alpha + beta), abs(alpha - beta)
    stable = abs(plus - 1) <= tol and abs(minus - 1) <= tol
    residuals = (
        abs(abs(alpha) ** 2 + abs(beta) ** 2 - 1),
        abs(2 * (alpha * beta.conjugate()).real),
    )
    return StabilityVerdict(stable, (plus, minus), residuals)


def iterate_stationary(matrix: TwoStateMatrix, steps: int = 1000, tol: float = DEFAULT_TOL) -> bool:
    """Brute-force stability check by repeated application.

    Drives ``|+>`` and ``|->`` forward ``steps`` times and, when the matrix is
    invertible, backward as well.  Returns False as soon as a norm leaves
    ``[tol, 1/tol]``.
    """
    forward = matrix.as_array()
    maps = [forward]
    if abs(np.linalg.det(forward)) > 0:
        maps.append(np.linalg.inv(forward))
    else:
        return False
    lo, hi = tol, 1 / tol
    for m in maps:
        for start in (np.array([1, 1]) / math.sqrt(2), np.array([1, -1]) / math.sqrt(2)):
            v = start.astype(complex)
            for _ in range(steps):
                v = m @ v
                n = np.linalg.norm(v)
                if not lo <= n <= hi:
                    return False
    return True
