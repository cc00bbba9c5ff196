import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from circqft import hamiltonians as ham
from oracles import model_operator, offset_operator, rabi_operator

FIELDS = [f.name for f in ham.FullParams.__dataclass_fields__.values()]
amp = st.floats(0, 5)
angle = st.floats(0, 2 * math.pi)


@settings(max_examples=50, deadline=None)
@given(st.fixed_dictionaries({n: (amp if not n.startswith(("phi", "theta")) else angle) for n in FIELDS}))
def test_full_model_is_transpose_of_operator_form(kw):
    h = ham.build_full(ham.FullParams(**kw))
    assert np.max(np.abs(h - model_operator(**kw).T)) < 1e-12
    assert np.max(np.abs(h - h.conj().T)) == 0.0


@settings(max_examples=30, deadline=None)
@given(amp, amp, angle)
def test_configuration_1_collapses_to_circulant(J, J1, phi):
    full = ham.build_full(ham.configuration_1(J, J1, phi))
    circ = ham.build_circulant(ham.CirculantParams(1, J=J, J1=J1, phi=phi))
    assert np.max(np.abs(full - circ)) < 1e-14
    assert ham.is_circulant(full)[0]


@settings(max_examples=30, deadline=None)
@given(amp, amp, amp, angle)
def test_configuration_2_collapses_to_circulant(J, J1, w1, phi):
    full = ham.build_full(ham.configuration_2(J, J1, w1, phi))
    circ = ham.build_circulant(ham.CirculantParams(2, J=J, J1=J1, omega1=w1, phi=phi))
    assert np.max(np.abs(full - circ)) < 1e-14


def test_circulant_first_row_and_shift_structure():
    phi = 0.3
    e = np.exp(1j * phi)
    h = ham.build_circulant(ham.CirculantParams(1, J=1.0, J1=2.0, phi=phi))
    assert np.allclose(h[0], [0, e, 2 * e, np.conj(e), 0, e, 2 * np.conj(e), np.conj(e)])
    p = ham.cyclic_shift()
    assert np.max(np.abs(p @ h - h @ p)) < 1e-15


def test_J1_only_entries():
    h = ham.build_full(ham.FullParams(J1=1.0))
    nz = {tuple(x) for x in np.argwhere(np.abs(h) > 0)}
    upper = {(r, c) for r, c in nz if r < c}
    assert upper == {(0, 6), (1, 7), (2, 4), (3, 5)}


def test_offset_diagonal():
    d = np.diag(ham.build_offset(ham.OffsetParams(1, 2, 4))).real
    assert list(d) == [7, -1, 3, -5, 5, -3, 1, -7]
    assert np.allclose(ham.build_offset(ham.OffsetParams(1, 2, 4)), offset_operator(1, 2, 4))


@settings(max_examples=30, deadline=None)
@given(amp, amp, amp, amp, angle)
def test_rotating_matches_operator_form(J, J1, w2, w3, phi):
    h = ham.build_rotating(ham.RotatingParams(J, J1, w2, w3, phi))
    assert np.max(np.abs(h - rabi_operator(J, J1, w2, w3, phi).T)) < 1e-12


def test_rotating_entry_that_was_misprinted():
    phi = math.pi / 4
    h = ham.build_rotating(ham.RotatingParams(J=1.0, J1=2.0, omega2=3.0, omega3=4.0, phi=phi))
    assert h[5, 4] == pytest.approx(4.0 * np.exp(-1j * phi))
    assert h[0, 1] == pytest.approx(4.0 * np.exp(1j * phi))
    assert h[0, 6] == pytest.approx(2.0 * np.exp(-1j * phi))
    assert h[0, 7] == pytest.approx(1.0 * np.exp(-1j * phi))


def test_rotating_reduces_to_circulant_at_final_point():
    J, J1, phi = 1.3, 0.7, math.pi / 4
    rot = ham.build_rotating(ham.RotatingParams(J, J1, omega2=J1, omega3=J, phi=phi))
    circ = ham.build_circulant(ham.CirculantParams(1, J=J, J1=J1, phi=phi))
    assert np.max(np.abs(rot - circ)) < 1e-15


def test_counter_driving_slots():
    h = ham.build_counter_driving(0.5)
    assert h[0, 4] == h[4, 0] == h[1, 5] == h[5, 1] == -0.5
    assert np.count_nonzero(h) == 4


@pytest.mark.parametrize("bad", [dict(J=-1.0), dict(omega2=-0.1)])
def test_negative_amplitudes_rejected(bad):
    with pytest.raises(ValueError):
        ham.FullParams(**bad)


def test_variant_one_forbids_omega1():
    with pytest.raises(ValueError):
        ham.CirculantParams(1, J=1, J1=1, omega1=0.5)


def test_is_circulant_flags_perturbation():
    h = ham.build_circulant(ham.CirculantParams(1, J=1, J1=1, phi=0.2))
    h[3, 3] += 1e-6
    ok, dev = ham.is_circulant(h)
    assert not ok and dev == pytest.approx(1e-6)
