"""Text formats for schedules, state dumps and run traces.

Schedule file::

    # comment
    device <C> <K> <epsilon> <omega> <idle_rate>
    open <channel> <internal> <duration>
    phase <cavity> <internal|*> <phi>
    pipulse <cavity> <from> <to>

State dump: one ``s i re im`` line per stored amplitude, sorted by ``(s, i)``.
"""

from __future__ import annotations

from .compiler import Device, OpenChannel, PhaseShift, PiPulse, Schedule, Weights
from .executor import RunResult, op_name
from .statevec import StateVector
from .twostate import ChannelParams


class ScheduleParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


def _f(x: float) -> str:
    return f"{x:.16e}"


def serialize_schedule(schedule: Schedule) -> str:
    dev = schedule.device
    lines = []
    if schedule.target_weights is not None:
        lines.append(f"# weights {schedule.target_weights}")
    lines.append(
        f"device {dev.cavities} {dev.internals} {_f(dev.params.epsilon)} {_f(dev.params.omega)} {_f(dev.idle_rate)}"
    )
    for op in schedule.ops:
        if isinstance(op, OpenChannel):
            lines.append(f"open {op.channel} {op.selective_internal} {_f(op.duration)}")
        elif isinstance(op, PhaseShift):
            internal = "*" if op.internal is None else str(op.internal)
            lines.append(f"phase {op.cavity} {internal} {_f(op.phi)}")
        else:
            lines.append(f"pipulse {op.cavity} {op.from_internal} {op.to_internal}")
    return "\n".join(lines) + "\n"


def _int(tok: str, what: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ScheduleParseError(f"{what} must be an integer, got {tok!r}", lineno) from None


def _float(tok: str, what: str, lineno: int) -> float:
    try:
        return float(tok)
    except ValueError:
        raise ScheduleParseError(f"{what} must be a number, got {tok!r}", lineno) from None


_ARITY = {"device": 5, "open": 3, "phase": 3, "pipulse": 3}


def parse_schedule(text: str | bytes) -> Schedule:
    """Parse and validate a schedule file.

    The target weights are recovered from the channel typing: internal
    state ``s`` gets one unit of weight per channel typed for it.
    """
    if isinstance(text, bytes):
        text = text.decode()
    device: Device | None = None
    ops = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        word, *args = line.split()
        if word not in _ARITY:
            raise ScheduleParseError(f"unknown directive {word!r}", lineno)
        if len(args) != _ARITY[word]:
            raise ScheduleParseError(f"{word} takes {_ARITY[word]} fields, got {len(args)}", lineno)
        try:
            if word == "device":
                if device is not None:
                    raise ScheduleParseError("duplicate device header", lineno)
                params = ChannelParams(_float(args[2], "epsilon", lineno), _float(args[3], "omega", lineno))
                device = Device(
                    _int(args[0], "cavity count", lineno),
                    _int(args[1], "internal count", lineno),
                    params,
                    _float(args[4], "idle rate", lineno),
                )
                continue
            if device is None:
                raise ScheduleParseError("operation before device header", lineno)
            if word == "open":
                op = OpenChannel(
                    _int(args[0], "channel", lineno), _int(args[1], "internal", lineno), _float(args[2], "duration", lineno)
                )
            elif word == "phase":
                internal = None if args[1] == "*" else _int(args[1], "internal", lineno)
                op = PhaseShift(_int(args[0], "cavity", lineno), internal, _float(args[2], "phi", lineno))
            else:
                op = PiPulse(_int(args[0], "cavity", lineno), _int(args[1], "from", lineno), _int(args[2], "to", lineno))
        except ScheduleParseError:
            raise
        except ValueError as exc:
            raise ScheduleParseError(str(exc), lineno) from None
        ops.append(op)
    if device is None:
        raise ScheduleParseError("missing device header")

    counts = [0] * device.internals
    typing: dict[int, int] = {}
    for op in ops:
        if isinstance(op, OpenChannel) and 0 <= op.selective_internal < device.internals:
            if op.channel not in typing:
                counts[op.selective_internal] += 1
            typing.setdefault(op.channel, op.selective_internal)
    while counts and counts[-1] == 0:
        counts.pop()
    weights = Weights(tuple(counts)) if counts and all(counts) else None
    try:
        return Schedule(device, tuple(ops), weights)
    except ValueError as exc:
        raise ScheduleParseError(f"invalid schedule: {exc}") from None


def dump_state(state: StateVector) -> str:
    return "".join(f"{s} {i} {v.real!r} {v.imag!r}\n" for (s, i), v in state.items())


def parse_state(text: str | bytes, cavities: int | None = None, internals: int | None = None) -> StateVector:
    """Read a state dump.  Missing dimensions are taken as the smallest that fit."""
    if isinstance(text, bytes):
        text = text.decode()
    amps: dict[tuple[int, int], complex] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 4:
            raise ValueError(f"line {lineno}: expected 's i re im', got {line!r}")
        try:
            s, i = int(fields[0]), int(fields[1])
            value = complex(float(fields[2]), float(fields[3]))
        except ValueError:
            raise ValueError(f"line {lineno}: malformed record {line!r}") from None
        if s < 0 or i < 0:
            raise ValueError(f"line {lineno}: negative index")
        if (s, i) in amps:
            raise ValueError(f"line {lineno}: duplicate label ({s}, {i})")
        amps[s, i] = value
    if cavities is None:
        cavities = max((i for _, i in amps), default=0) + 1
    if internals is None:
        internals = max((s for s, _ in amps), default=0) + 1
    return StateVector(cavities, internals, amps)


def format_trace(result: RunResult) -> str:
    return "".join(f"step {e.step} {op_name(e.op)} norm={e.norm:.12g}\n" for e in result.trace)
