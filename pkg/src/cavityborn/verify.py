"""Endpoint checks: equal amplitudes, permutation symmetry, probabilities by counting.

Probabilities are never read off as squared amplitudes.  Once the final
state is shown to be an equal-amplitude superposition that is invariant
under every exchange of occupied cavities, each of the ``N`` cavities gets
``1/N``, and each internal state collects the share of the cavities it was
sent to.  The agreement with ``n_s / N`` is then something to check, not an
input.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .compiler import Schedule, Weights, compile
from .executor import RunResult, run
from .statevec import StateVector, amplitude_dispersion, swap_cavities
from .twostate import ChannelParams

PROTOCOL_TOL = 1e-9


class VerificationError(RuntimeError):
    """An endpoint check failed, so no probabilities can be assigned."""


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    value: float
    tol: float

    def __bool__(self) -> bool:
        return self.passed

    def report(self) -> str:
        return f"check {self.name} {'pass' if self.passed else 'fail'} value={self.value:.12g} tol={self.tol:.12g}"


def remove_global_phase(state: StateVector) -> StateVector:
    """Rotate the state so its largest-magnitude amplitude is real and positive."""
    if not len(state):
        return state
    _, top = max(state.items(), key=lambda kv: abs(kv[1]))
    return state * cmath.exp(-1j * cmath.phase(top))


def weighted_input(weights: Weights, schedule: Schedule) -> StateVector:
    """``sum_s sqrt(n_s)|s,0>`` on the schedule's device, deliberately unnormalized."""
    dev = schedule.device
    return StateVector(dev.cavities, dev.internals, {(s, 0): math.sqrt(n) for s, n in enumerate(weights.entries)})


def check_equal_amplitude(state: StateVector, cavities: Iterable[int], tol: float = PROTOCOL_TOL) -> CheckResult:
    """Equal magnitudes over ``cavities``, all on internal state 0, empty centre."""
    cavities = sorted(set(cavities))
    dispersion = amplitude_dispersion(state, cavities) if cavities else math.inf
    stray = max((abs(state[s, i]) for i in cavities for s in range(1, state.internals)), default=0.0)
    center = state.cavity_magnitude(0)
    passed = dispersion <= tol and stray <= tol and center <= tol
    return CheckResult("equal_amplitude", passed, dispersion, tol)


def permutation_invariance(state: StateVector, cavities: Iterable[int], tol: float = PROTOCOL_TOL) -> CheckResult:
    """Every transposition of two listed cavities leaves the state unchanged within ``tol``."""
    cavities = sorted(set(cavities))
    worst = 0.0
    for i, j in itertools.combinations(cavities, 2):
        worst = max(worst, swap_cavities(state, i, j).max_difference(state))
    return CheckResult("permutation_invariance", len(cavities) >= 2 and worst <= tol, worst, tol)


def count_probabilities(schedule: Schedule, state: StateVector, tol: float = PROTOCOL_TOL) -> list[Fraction]:
    """Give each occupied cavity ``1/N`` and sum by the internal state that was routed there."""
    routed = schedule.channel_types()
    occupied = [c for c in routed if state.cavity_magnitude(c) > tol]
    if not occupied:
        raise VerificationError("no occupied cavities to count")
    share = Fraction(1, len(occupied))
    probs = [Fraction(0)] * schedule.device.internals
    for c in occupied:
        probs[routed[c]] += share
    return probs


@dataclass(frozen=True)
class ProtocolOutcome:
    weights: Weights
    schedule: Schedule
    result: RunResult
    checks: tuple[CheckResult, ...]
    probabilities: tuple[Fraction, ...]


def execute_protocol(
    weights: Weights | Sequence[int],
    params: ChannelParams | None = None,
    idle_rate: float = 0.0,
    tol: float = PROTOCOL_TOL,
    schedule: Schedule | None = None,
) -> ProtocolOutcome:
    """Compile (unless given a schedule), run on ``sum sqrt(n_s)|s,0>`` and count.

    Raises :class:`VerificationError` when the equal-amplitude gate fails.
    """
    if not isinstance(weights, Weights):
        weights = Weights(tuple(weights))
    if schedule is None:
        schedule = compile(weights, params, idle_rate=idle_rate)
    dev = schedule.device
    if len(weights) > dev.internals or weights.total + 1 > dev.cavities:
        raise ValueError(f"weights {weights} do not fit device C={dev.cavities}, K={dev.internals}")
    result = run(schedule, weighted_input(weights, schedule))
    cavities = range(1, weights.total + 1)
    gate = check_equal_amplitude(result.state, cavities, tol)
    if not gate.passed:
        raise VerificationError(f"equal-amplitude gate failed: {gate.report()}")
    probs = count_probabilities(schedule, result.state, tol)
    return ProtocolOutcome(weights, schedule, result, (gate,), tuple(probs))


def protocol_probabilities(
    weights: Weights | Sequence[int],
    params: ChannelParams | None = None,
    idle_rate: float = 0.0,
    tol: float = PROTOCOL_TOL,
) -> list[float]:
    """Probabilities per internal state obtained by running the protocol.

    >>> protocol_probabilities([3, 2])
    [0.6, 0.4]
    """
    outcome = execute_protocol(weights, params, idle_rate, tol)
    return [float(p) for p in outcome.probabilities]


def verify_schedule(
    schedule: Schedule, weights: Weights, tol: float = PROTOCOL_TOL, drift_tol: float = 1e-12
) -> list[CheckResult]:
    """Full battery of checks used by the ``verify`` command."""
    result = run(schedule, weighted_input(weights, schedule))
    final = result.state
    cavities = list(range(1, weights.total + 1))
    checks = [
        check_equal_amplitude(final, cavities, tol),
        permutation_invariance(final, cavities, tol),
        CheckResult("norm_conservation", result.max_relative_drift() <= drift_tol, result.max_relative_drift(), drift_tol),
    ]
    expected = [n / weights.total for n in weights.entries]
    if checks[0].passed:
        probs = [float(p) for p in count_probabilities(schedule, final, tol)][: len(weights)]
        err = max(abs(a - b) for a, b in zip(probs, expected))
    else:
        err = math.inf
    checks.append(CheckResult("born_rule", err <= tol, err, tol))
    return checks
