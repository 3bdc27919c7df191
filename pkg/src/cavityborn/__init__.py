"""Cavity-network protocol: equal-amplitude superpositions and probabilities by symmetry."""

from .compiler import (
    CapacityError,
    Device,
    OpenChannel,
    PhaseShift,
    PiPulse,
    Schedule,
    Weights,
    compile,
    rationalize,
    tau_for_step,
)
from .executor import RunResult, apply_phase_shift, apply_pi_pulse, run
from .statevec import BasisLabel, StateVector, amplitude_dispersion, norm, swap_cavities
from .textio import ScheduleParseError, dump_state, parse_schedule, parse_state, serialize_schedule
from .twostate import (
    ChannelParams,
    StabilityVerdict,
    TwoStateMatrix,
    evolve_channel,
    stability_verdict,
    unitary_from_params,
)
from .verify import (
    VerificationError,
    check_equal_amplitude,
    permutation_invariance,
    protocol_probabilities,
)

compile_schedule = compile

__version__ = "0.1.0"
