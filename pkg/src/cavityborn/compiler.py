"""Compile integer weights into a schedule of device operations.

Given weights ``(n_0, ..., n_{K-1})`` the input state is
``sum_s sqrt(n_s) |s,0>``.  Internal state ``s`` owns a contiguous block of
``n_s`` peripheral cavities.  Opening the ``j``-th channel of a block for
``tau_k`` (``k = n, n-1, ..., 1``) moves exactly one unit of amplitude out
of the centre: ``sqrt(k)|s,0> -> sqrt(k-1)|s,0> + (phase)|s,j>``.  Phase
shifts then strip the deposited phases and pi pulses relabel every block
to internal state 0, leaving ``sum_{i=1..N} |0,i>``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence, Union

from .twostate import ChannelParams, unitary_from_params


class CapacityError(ValueError):
    """The device has too few cavities for the requested weights."""


@dataclass(frozen=True)
class Weights:
    entries: tuple[int, ...]

    def __post_init__(self):
        entries = tuple(self.entries)
        if not entries:
            raise ValueError("weights need at least one entry")
        for n in entries:
            if isinstance(n, bool) or int(n) != n or n < 1:
                raise ValueError(f"weights must be positive integers, got {entries}")
        object.__setattr__(self, "entries", tuple(int(n) for n in entries))

    @classmethod
    def parse(cls, text: str) -> "Weights":
        """Parse ``"3,2"`` style input."""
        try:
            return cls(tuple(int(x) for x in text.split(",")))
        except ValueError as exc:
            raise ValueError(f"bad weights {text!r}: {exc}") from None

    @property
    def total(self) -> int:
        return sum(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def blocks(self) -> list[range]:
        """Cavity range owned by each internal state."""
        out, start = [], 1
        for n in self.entries:
            out.append(range(start, start + n))
            start += n
        return out

    def __str__(self) -> str:
        return ",".join(map(str, self.entries))


@dataclass(frozen=True)
class Device:
    cavities: int
    internals: int
    params: ChannelParams = field(default_factory=ChannelParams)
    idle_rate: float = 0.0

    def __post_init__(self):
        if self.cavities < 2:
            raise ValueError(f"device needs a centre and at least one peripheral cavity, got C={self.cavities}")
        if self.internals < 1:
            raise ValueError(f"device needs at least one internal state, got K={self.internals}")
        if not math.isfinite(self.idle_rate):
            raise ValueError("idle rate must be finite")


@dataclass(frozen=True)
class OpenChannel:
    channel: int
    selective_internal: int
    duration: float

    def __post_init__(self):
        if self.channel < 1:
            raise ValueError(f"channel must be a peripheral cavity >= 1, got {self.channel}")
        if not (math.isfinite(self.duration) and self.duration > 0):
            raise ValueError(f"channel duration must be positive, got {self.duration}")


@dataclass(frozen=True)
class PhaseShift:
    cavity: int
    internal: int | None  # None: every internal state
    phi: float

    def __post_init__(self):
        if not (-math.pi < self.phi <= math.pi):
            raise ValueError(f"phase must lie in (-pi, pi], got {self.phi}")


@dataclass(frozen=True)
class PiPulse:
    cavity: int
    from_internal: int
    to_internal: int

    def __post_init__(self):
        if self.from_internal == self.to_internal:
            raise ValueError("pi pulse needs two distinct internal states")


PrimitiveOp = Union[OpenChannel, PhaseShift, PiPulse]


@dataclass(frozen=True)
class Schedule:
    device: Device
    ops: tuple[PrimitiveOp, ...]
    target_weights: Weights | None = None

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(self.ops))
        validate(self)

    def channel_types(self) -> dict[int, int]:
        """Peripheral cavity -> internal state allowed through its channel."""
        return {op.channel: op.selective_internal for op in self.ops if isinstance(op, OpenChannel)}

    def count(self, kind: type) -> int:
        return sum(isinstance(op, kind) for op in self.ops)


def validate(schedule: Schedule) -> None:
    dev = schedule.device
    typing: dict[int, int] = {}
    for n, op in enumerate(schedule.ops):
        if isinstance(op, OpenChannel):
            cavity, internals = op.channel, (op.selective_internal,)
            prev = typing.setdefault(op.channel, op.selective_internal)
            if prev != op.selective_internal:
                raise ValueError(
                    f"op {n}: channel {op.channel} used for internal {op.selective_internal} "
                    f"but already typed for internal {prev}"
                )
        elif isinstance(op, PhaseShift):
            cavity = op.cavity
            internals = () if op.internal is None else (op.internal,)
        elif isinstance(op, PiPulse):
            cavity, internals = op.cavity, (op.from_internal, op.to_internal)
        else:
            raise TypeError(f"op {n}: unknown operation {op!r}")
        if not 0 <= cavity < dev.cavities:
            raise ValueError(f"op {n}: cavity {cavity} outside 0..{dev.cavities - 1}")
        for s in internals:
            if not 0 <= s < dev.internals:
                raise ValueError(f"op {n}: internal {s} outside 0..{dev.internals - 1}")
    w = schedule.target_weights
    if w is not None and len(w) > dev.internals:
        raise ValueError(f"weights have {len(w)} entries but device has K={dev.internals}")


def arccot(x: float) -> float:
    return math.atan2(1.0, x)


def wrap_phase(phi: float) -> float:
    """Reduce an angle to ``(-pi, pi]``."""
    phi = math.remainder(phi, 2 * math.pi)
    return math.pi if phi <= -math.pi else phi


def tau_for_step(k: int, omega: float) -> float:
    """Channel opening time that takes the centre from ``sqrt(k)`` to ``sqrt(k-1)``.

    Solves ``cot(omega * tau) = sqrt(k - 1)`` with a positive ``tau``.  For
    negative ``omega`` the branch ``omega*tau`` in ``(-pi, -pi/2]`` is used.

    >>> tau_for_step(2, 1.0) == math.pi / 4
    True
    """
    if k < 1:
        raise ValueError(f"step index must be >= 1, got {k}")
    if omega == 0:
        raise ValueError("omega must be nonzero")
    theta = arccot(math.sqrt(k - 1))
    if omega > 0:
        return theta / omega
    return (math.pi - theta) / -omega


def compile(
    weights: Weights | Sequence[int],
    params: ChannelParams | None = None,
    cavities: int | None = None,
    idle_rate: float = 0.0,
) -> Schedule:
    """Build the schedule taking ``sum_s sqrt(n_s)|s,0>`` to ``sum_i |0,i>``.

    ``cavities`` defaults to ``N + 1``.  Phases are tracked in closed form
    from :func:`unitary_from_params`; nothing is simulated.  Each block's
    corrections are emitted right after its openings and already include the
    idle phase its cavities pick up while later blocks run.
    """
    if not isinstance(weights, Weights):
        weights = Weights(tuple(weights))
    params = params if params is not None else ChannelParams()
    total = weights.total
    if cavities is None:
        cavities = total + 1
    if cavities < total + 1:
        raise CapacityError(f"weights need {total + 1} cavities, device has {cavities}")
    device = Device(cavities, len(weights), params, idle_rate)

    opens: list[list[OpenChannel]] = []
    for s, block in enumerate(weights.blocks()):
        n = len(block)
        opens.append([OpenChannel(c, s, tau_for_step(k, params.omega)) for c, k in zip(block, range(n, 0, -1))])

    # unit phase of each central component and of each deposited cavity
    center = [1 + 0j] * len(weights)
    deposited: dict[int, complex] = {}
    for s, block_ops in enumerate(opens):
        n = len(block_ops)
        for op, k in zip(block_ops, range(n, 0, -1)):
            m = unitary_from_params(params, op.duration)
            w = m.beta * center[s] * math.sqrt(k)
            idle = cmath.exp(1j * idle_rate * op.duration)
            for c in deposited:
                deposited[c] *= idle
            deposited[op.channel] = w / abs(w)
            if k > 1:
                a = m.alpha
                center[s] *= a / abs(a)
            for t in range(len(center)):
                if t != s:
                    center[t] *= idle

    ops: list[PrimitiveOp] = []
    for s, block_ops in enumerate(opens):
        ops.extend(block_ops)
        ops.extend(PhaseShift(op.channel, s, wrap_phase(-cmath.phase(deposited[op.channel]))) for op in block_ops)
    for s, block in enumerate(weights.blocks()):
        if s:
            ops.extend(PiPulse(c, s, 0) for c in block)
    return Schedule(device, tuple(ops), weights)


def rationalize(probabilities: Sequence[float], max_total: int) -> Weights:
    """Integer weights whose ratios best approximate ``probabilities``.

    Minimizes ``max_i |n_i/N - p_i|`` over all ``N <= max_total`` and all
    positive integer vectors summing to ``N``; ties go to the smaller ``N``
    and then to the lexicographically smaller vector.

    >>> rationalize([0.6, 0.4], 10).entries
    (3, 2)
    """
    p = [float(x) for x in probabilities]
    k = len(p)
    if k == 0 or any(not x > 0 for x in p):
        raise ValueError("probabilities must be positive")
    if abs(math.fsum(p) - 1) > 1e-9:
        raise ValueError(f"probabilities sum to {math.fsum(p)}, not 1")
    if max_total < k:
        raise ValueError(f"max_total={max_total} cannot give {k} states a positive weight")

    best: tuple[float, tuple[int, ...]] | None = None
    for total in range(k, max_total + 1):
        err, vec = _best_for_total(p, total)
        if best is None or err / total < best[0] - 1e-15:
            best = (err / total, vec)
            if best[0] == 0:
                break
    assert best is not None
    return Weights(best[1])


_SLACK = 1e-12


def _bounds(p: Sequence[float], total: int, spread: float) -> list[tuple[int, int]]:
    return [
        (max(1, math.ceil(total * x - spread - _SLACK)), math.floor(total * x + spread + _SLACK))
        for x in p
    ]


def _feasible(p: Sequence[float], total: int, spread: float) -> bool:
    b = _bounds(p, total, spread)
    return all(lo <= hi for lo, hi in b) and sum(lo for lo, _ in b) <= total <= sum(hi for _, hi in b)


def _best_for_total(p: Sequence[float], total: int) -> tuple[float, tuple[int, ...]]:
    """Smallest achievable ``max |n_i - N p_i|`` at fixed ``N`` and the lexicographically least vector."""
    # the optimum is attained at one of the distances |n - N p_i|
    cands = sorted({abs(n - total * x) for x in p for n in range(1, total + 1)})
    lo, hi = 0, len(cands) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _feasible(p, total, cands[mid]):
            hi = mid
        else:
            lo = mid + 1
    spread = cands[lo]
    bounds = _bounds(p, total, spread)
    vec, left = [], total
    for idx, (b_lo, b_hi) in enumerate(bounds):
        rest_hi = sum(h for _, h in bounds[idx + 1:])
        rest_lo = sum(l for l, _ in bounds[idx + 1:])
        n = max(b_lo, left - rest_hi)
        assert n <= min(b_hi, left - rest_lo)
        vec.append(n)
        left -= n
    actual = max(abs(n - total * x) for n, x in zip(vec, p))
    return actual, tuple(vec)
