"""Run a schedule on a state vector, one primitive operation at a time."""

from __future__ import annotations

import cmath
from dataclasses import dataclass

from .compiler import OpenChannel, PhaseShift, PiPulse, PrimitiveOp, Schedule
from .statevec import StateVector, norm
from .twostate import evolve_channel, unitary_from_params


@dataclass(frozen=True)
class TraceEntry:
    step: int
    op: PrimitiveOp
    norm: float
    state: StateVector | None = None


@dataclass(frozen=True)
class RunResult:
    state: StateVector
    initial_norm: float
    trace: tuple[TraceEntry, ...]

    def max_relative_drift(self) -> float:
        """Largest per-op relative change of the norm."""
        worst, prev = 0.0, self.initial_norm
        for entry in self.trace:
            if prev > 0:
                worst = max(worst, abs(entry.norm - prev) / prev)
            prev = entry.norm
        return worst


def op_name(op: PrimitiveOp) -> str:
    return {OpenChannel: "open", PhaseShift: "phase", PiPulse: "pipulse"}[type(op)]


def apply_phase_shift(state: StateVector, cavity: int, internal: int | None, phi: float) -> StateVector:
    """Multiply the amplitudes in ``cavity`` by ``exp(i phi)``.

    ``internal=None`` hits every internal state in the cavity.
    """
    state.check_cavity(cavity)
    if internal is not None and not 0 <= internal < state.internals:
        raise IndexError(f"internal index {internal} outside 0..{state.internals - 1}")
    factor = cmath.exp(1j * phi)
    changes = {
        (s, i): v * factor
        for (s, i), v in state.amplitudes.items()
        if i == cavity and (internal is None or s == internal)
    }
    return state.updated(changes) if changes else state


def apply_pi_pulse(state: StateVector, cavity: int, from_internal: int, to_internal: int) -> StateVector:
    """Exchange internal states ``from_internal`` and ``to_internal`` inside one cavity."""
    state.check_cavity(cavity)
    if from_internal == to_internal:
        raise ValueError("pi pulse needs two distinct internal states")
    for s in (from_internal, to_internal):
        if not 0 <= s < state.internals:
            raise IndexError(f"internal index {s} outside 0..{state.internals - 1}")
    a, b = state[from_internal, cavity], state[to_internal, cavity]
    return state.updated({(from_internal, cavity): b, (to_internal, cavity): a})


def _idle(state: StateVector, skip: tuple[tuple[int, int], ...], phase: complex) -> StateVector:
    amps = {label: (v if label in skip else v * phase) for label, v in state.amplitudes.items()}
    return StateVector._trusted(state, amps)


def apply_op(state: StateVector, op: PrimitiveOp, schedule: Schedule) -> StateVector:
    dev = schedule.device
    if isinstance(op, OpenChannel):
        matrix = unitary_from_params(dev.params, op.duration)
        out = evolve_channel(state, op.channel, op.selective_internal, matrix)
        if dev.idle_rate:
            s = op.selective_internal
            out = _idle(out, ((s, 0), (s, op.channel)), cmath.exp(1j * dev.idle_rate * op.duration))
        return out
    if isinstance(op, PhaseShift):
        return apply_phase_shift(state, op.cavity, op.internal, op.phi)
    if isinstance(op, PiPulse):
        return apply_pi_pulse(state, op.cavity, op.from_internal, op.to_internal)
    raise TypeError(f"malformed op {op!r}")


def run(schedule: Schedule, initial: StateVector, keep_states: bool = False) -> RunResult:
    """Fold the schedule over ``initial``.

    Channel openings use the exact channel unitary; while a channel is open
    every other basis label picks up the device's idle phase.  The trace
    records the norm after each op (and the full state if ``keep_states``).
    """
    dev = schedule.device
    if initial.cavities != dev.cavities or initial.internals != dev.internals:
        raise ValueError(
            f"state is C={initial.cavities}, K={initial.internals}; "
            f"schedule expects C={dev.cavities}, K={dev.internals}"
        )
    state = initial
    trace = []
    for k, op in enumerate(schedule.ops):
        state = apply_op(state, op, schedule)
        trace.append(TraceEntry(k, op, norm(state), state if keep_states else None))
    return RunResult(state, norm(initial), tuple(trace))
