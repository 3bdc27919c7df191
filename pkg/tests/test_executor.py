import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cavityborn.compiler import Device, OpenChannel, PhaseShift, PiPulse, Schedule, compile
from cavityborn.executor import apply_phase_shift, apply_pi_pulse, run
from cavityborn.statevec import StateVector, norm
from cavityborn.twostate import ChannelParams
from cavityborn.verify import remove_global_phase

A, B = 0, 1


def weighted(w, scale=1.0):
    return StateVector.from_weights(w, sum(w) + 1, scale)


def uniform(n, scale=1.0):
    return StateVector(n + 1, 1, {(A, i): scale for i in range(1, n + 1)})


def test_empty_schedule_is_identity():
    v = StateVector(3, 2, {(A, 0): 1 + 2j, (B, 2): -0.5})
    out = run(Schedule(Device(3, 2), ()), v)
    assert out.state == v and out.trace == ()


def test_three_two_gives_five_unit_amplitudes():
    out = run(compile([3, 2]), weighted([3, 2])).state
    expected = StateVector(6, 2, {(A, i): 1.0 for i in range(1, 6)})
    assert remove_global_phase(out).max_difference(expected) <= 1e-9
    # phase fixes leave no global phase at all
    assert out.max_difference(expected) <= 1e-12


def test_normalized_input_scales_output():
    out = run(compile([3, 2]), weighted([3, 2], 1 / math.sqrt(5))).state
    expected = StateVector(6, 2, {(A, i): 1 / math.sqrt(5) for i in range(1, 6)})
    assert remove_global_phase(out).max_difference(expected) <= 1e-9


def test_two_two_two_equal_amplitudes():
    out = run(compile([2, 2, 2]), weighted([2, 2, 2])).state
    mags = [out.cavity_magnitude(i) for i in range(1, 7)]
    assert max(mags) - min(mags) <= 1e-12
    assert all(abs(out[A, i] - 1) <= 1e-12 for i in range(1, 7))
    assert out.cavity_magnitude(0) <= 1e-12


def test_phase_shift_examples():
    v = StateVector(3, 2, {(A, 1): 0.3 - 0.1j, (B, 1): 2.0, (A, 2): 1j})
    assert apply_phase_shift(v, 1, None, 0.0) == v
    flipped = apply_phase_shift(v, 1, A, math.pi)
    assert flipped[A, 1] == pytest.approx(-(0.3 - 0.1j), abs=1e-15)
    assert flipped[B, 1] == 2.0
    fixed = apply_phase_shift(v, 2, A, -math.pi / 2)
    assert fixed[A, 2] == pytest.approx(1, abs=1e-15)
    both = apply_phase_shift(v, 1, None, math.pi / 2)
    assert both[B, 1] == pytest.approx(2j, abs=1e-15)
    with pytest.raises(IndexError):
        apply_phase_shift(v, 3, A, 0.1)


def test_pi_pulse_examples():
    v = StateVector(5, 2, {(B, 4): 0.7})
    out = apply_pi_pulse(v, 4, B, A)
    assert out == StateVector(5, 2, {(A, 4): 0.7})
    assert apply_pi_pulse(StateVector(5, 2, {(A, 1): 1}), 3, B, A) == StateVector(5, 2, {(A, 1): 1})
    w = StateVector(5, 2, {(A, 2): 1j, (B, 2): -3})
    assert apply_pi_pulse(apply_pi_pulse(w, 2, A, B), 2, A, B) == w
    assert norm(apply_pi_pulse(w, 2, A, B)) == norm(w)
    with pytest.raises(ValueError):
        apply_pi_pulse(w, 2, A, A)
    with pytest.raises(IndexError):
        apply_pi_pulse(w, 5, A, B)


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        run(compile([3, 2]), StateVector(5, 2, {(A, 0): 1}))


def test_keep_states_trace():
    res = run(compile([2]), weighted([2]), keep_states=True)
    assert [e.step for e in res.trace] == [0, 1, 2, 3]
    assert res.trace[-1].state == res.state


def central_magnitudes(schedule, state, internal):
    res = run(schedule, state, keep_states=True)
    return [
        abs(e.state[internal, 0])
        for e in res.trace
        if isinstance(e.op, OpenChannel) and e.op.selective_internal == internal
    ]


weight_vectors = st.lists(st.integers(1, 12), min_size=1, max_size=4)
device_knobs = st.tuples(st.floats(-2, 2), st.sampled_from([1.0, 0.6, -1.4]), st.floats(-1.5, 1.5))


@settings(max_examples=80, deadline=None)
@given(weight_vectors, device_knobs)
def test_central_amplitude_descends_one_unit_per_opening(w, knobs):
    eps, omega, idle = knobs
    sched = compile(w, ChannelParams(eps, omega), idle_rate=idle)
    v = weighted(w)
    for s, n in enumerate(w):
        mags = central_magnitudes(sched, v, s)
        assert mags == pytest.approx([math.sqrt(n - j) for j in range(1, n + 1)], abs=1e-12)


@settings(max_examples=80, deadline=None)
@given(weight_vectors, device_knobs)
def test_openings_never_touch_other_states_or_deposited_cavities(w, knobs):
    eps, omega, idle = knobs
    sched = compile(w, ChannelParams(eps, omega), idle_rate=idle)
    res = run(sched, weighted(w), keep_states=True)
    prev = weighted(w)
    for e in res.trace:
        if isinstance(e.op, OpenChannel):
            s, c = e.op.selective_internal, e.op.channel
            idle_phase = cmath.exp(1j * idle * e.op.duration)
            for (t, i), amp in prev.items():
                if (t, i) in ((s, 0), (s, c)):
                    continue
                # only the idle phase may act on untouched labels
                assert e.state[t, i] == amp * idle_phase or abs(e.state[t, i] - amp * idle_phase) <= 1e-15
        prev = e.state


@settings(max_examples=80, deadline=None)
@given(weight_vectors, device_knobs)
def test_norm_conserved_per_op(w, knobs):
    eps, omega, idle = knobs
    res = run(compile(w, ChannelParams(eps, omega), idle_rate=idle), weighted(w))
    assert res.max_relative_drift() <= 1e-12
    assert res.trace[-1].norm == pytest.approx(math.sqrt(sum(w)), rel=1e-12)


@settings(max_examples=80, deadline=None)
@given(weight_vectors, device_knobs)
def test_weight_carried_by_each_label_is_constant_until_its_pulse(w, knobs):
    eps, omega, idle = knobs
    sched = compile(w, ChannelParams(eps, omega), idle_rate=idle)
    res = run(sched, weighted(w), keep_states=True)
    pulsed = set()
    for e in res.trace:
        if isinstance(e.op, PiPulse):
            pulsed.add(e.op.from_internal)
            continue
        for s, n in enumerate(w):
            if s in pulsed or (s == 0 and pulsed):
                continue
            carried = sum(abs(a) ** 2 for (t, _), a in e.state.items() if t == s)
            assert carried == pytest.approx(n, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(weight_vectors, device_knobs)
def test_prefix_keeps_original_labels(w, knobs):
    eps, omega, idle = knobs
    sched = compile(w, ChannelParams(eps, omega), idle_rate=idle)
    prefix = Schedule(sched.device, tuple(op for op in sched.ops if not isinstance(op, PiPulse)), sched.target_weights)
    out = run(prefix, weighted(w)).state
    for s, block in enumerate(sched.target_weights.blocks()):
        for c in block:
            assert abs(out[s, c] - 1) <= 1e-12
    assert out.cavity_magnitude(0) <= 1e-12


def random_state(rng, dev):
    amps = {
        (s, i): complex(*rng.normal(size=2))
        for s in range(dev.internals)
        for i in range(dev.cavities)
        if rng.random() < 0.5
    }
    return StateVector(dev.cavities, dev.internals, amps)


@pytest.mark.parametrize("w", [[3, 2], [1, 2, 3], [4], [2, 5, 1, 3]])
def test_run_is_linear(w):
    rng = np.random.default_rng(sum(w))
    sched = compile(w, ChannelParams(0.7, 1.1), idle_rate=0.3)
    for _ in range(20):
        v, u = random_state(rng, sched.device), random_state(rng, sched.device)
        a, b = complex(*rng.normal(size=2)), complex(*rng.normal(size=2))
        lhs = run(sched, a * v + b * u).state
        rhs = a * run(sched, v).state + b * run(sched, u).state
        assert lhs.max_difference(rhs) <= 1e-12


def test_phase_shift_all_internal_states_in_schedule():
    sched = Schedule(Device(3, 2), (PhaseShift(1, None, math.pi),))
    out = run(sched, StateVector(3, 2, {(A, 1): 1, (B, 1): 1j})).state
    assert out.max_difference(StateVector(3, 2, {(A, 1): -1, (B, 1): -1j})) <= 1e-15
