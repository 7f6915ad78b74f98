"""Spin-CM right-hand sides, velocity map, constraints, conserved quantities,
frame rotations, and serialization."""
import json

import numpy as np
import pytest

from ncihf import (
    SpinCMState,
    TravelingWaveConfig,
    accel,
    backlund_velocity,
    conserved_quantities,
    constraint_residuals,
    phi_rhs,
    rotate_frame,
    spin_rhs,
    traveling_wave_state,
    wp2_prime,
)
from ncihf.spincm import ZeroSpinError, load_state, save_state, state_from_dict, state_to_dict
from ncihf.vec3 import cdot, cross, hnorm


def _tw_state(params, rho=1.0, phi1=0.3 + 0.1j):
    cfg = TravelingWaveConfig(a0=(0.37 + 1j * params.delta,), b0=(-0.91 - 1j * params.delta,), rho=rho, phi1_0=phi1)
    return traveling_wave_state(cfg, params)


# -- accelerations ------------------------------------------------------------


def test_accel_single_pole_families(square_params):
    st = _tw_state(square_params)
    acc_a, acc_b = accel(st)
    assert np.max(np.abs(acc_a)) == 0.0
    assert np.max(np.abs(acc_b)) == 0.0


def test_accel_orthogonal_spins_decouple(square_params):
    p = square_params
    s1 = np.array([1.0, 1j, 0.0])
    s2 = np.array([1.0, -1j, 0.0])  # s1.s2 = 1 - (-1)... choose truly orthogonal instead
    s2 = np.array([0.0, 0.0, 1.0])
    st = SpinCMState(
        a=np.array([0.9j * p.delta, 0.4 + 1.1j * p.delta]),
        adot=np.zeros(2, dtype=complex),
        s=np.stack([s1, s2]),
        b=np.zeros(0), bdot=np.zeros(0), t=np.zeros((0, 3)),
        phi=np.zeros(3), rho=1.0, params=p,
    )
    assert abs(cdot(s1, s2)) == 0.0
    acc_a, _ = accel(st)
    assert np.max(np.abs(acc_a)) == 0.0


def test_accel_matches_direct_summation(breather_state):
    """Independent re-evaluation: plain double loop over the defining sum."""
    st = breather_state
    p = st.params
    acc_a, acc_b = accel(st)
    for j in range(st.n_upper):
        direct = 0.0 + 0.0j
        for k in range(st.n_upper):
            if k != j:
                direct += -2.0 * complex(cdot(st.s[j], st.s[k])) * complex(wp2_prime(st.a[j] - st.a[k], p))
        assert abs(acc_a[j] - direct) < 1e-12 * max(1.0, abs(direct))


# -- spin precession ----------------------------------------------------------


def test_spin_rhs_total_spin_conserved(breather_state):
    ds, dt = spin_rhs(breather_state)
    assert np.max(np.abs(ds.sum(axis=0))) < 1e-13
    assert np.max(np.abs(dt.sum(axis=0))) < 1e-13
    ds, dt = spin_rhs(breather_state, shift=breather_state.params.field_shift)
    assert np.max(np.abs(ds.sum(axis=0))) < 1e-13
    assert np.max(np.abs(dt.sum(axis=0))) < 1e-13


def test_spin_rhs_single_member(square_params):
    st = _tw_state(square_params)
    ds, dt = spin_rhs(st)
    assert np.max(np.abs(ds)) == 0.0 and np.max(np.abs(dt)) == 0.0


def test_spin_rhs_matches_direct_summation(breather_state):
    from ncihf import wp2

    st = breather_state
    p = st.params
    ds, _ = spin_rhs(st, shift=0.0)
    for j in range(st.n_upper):
        direct = np.zeros(3, dtype=complex)
        for k in range(st.n_upper):
            if k != j:
                direct += -2.0 * cross(st.s[j], st.s[k]) * complex(wp2(st.a[j] - st.a[k], p))
        assert np.max(np.abs(ds[j] - direct)) < 1e-12


# -- background dynamics ------------------------------------------------------


def test_phi_rhs_single_member_is_zero(square_params):
    st = _tw_state(square_params)
    assert np.max(np.abs(phi_rhs(st))) == 0.0  # shift 0: empty pair sums


def test_phi_rhs_field_frame_traveling_wave(square_params):
    """With the zero-mean shift the background precesses: phi' = 2i c0 rho s1."""
    p = square_params
    st = _tw_state(p)
    dphi = phi_rhs(st, shift=p.field_shift)
    expected = 2j * p.field_shift * st.rho * st.s[0]
    assert np.max(np.abs(dphi - expected)) < 1e-13


def test_phi_rhs_real_for_real_reduction(breather_state):
    for shift in (0.0, breather_state.params.field_shift):
        dphi = phi_rhs(breather_state, shift=shift)
        assert np.max(np.abs(dphi.imag)) < 1e-13


def test_phi_rhs_matches_direct_summation(breather_state):
    from ncihf import f2_prime

    st = breather_state
    p = st.params
    val = phi_rhs(st, shift=0.0)
    direct = np.zeros(3, dtype=complex)
    for j in range(st.n_upper):
        for k in range(st.n_upper):
            if k != j:
                direct += 0.5j * cross(st.s[j], st.s[k]) * complex(f2_prime(st.a[j] - st.a[k], p))
                direct -= 0.5j * cross(st.t[j], st.t[k]) * complex(f2_prime(st.b[j] - st.b[k], p))
    assert np.max(np.abs(val - direct)) < 1e-12


# -- velocity map -------------------------------------------------------------


def test_traveling_wave_velocities(square_params):
    st = _tw_state(square_params, rho=1.0)
    adot, bdot = backlund_velocity(st)
    assert abs(adot[0] - st.rho) < 1e-13
    assert abs(bdot[0] + st.rho) < 1e-13


def test_velocity_wedge_equation_residual(breather_state):
    """s_j adot_j + s_j ^ B_j has vanishing Hermitian norm under constraints 1-2."""
    from ncihf.spincm import _brackets

    st = breather_state
    adot, bdot = backlund_velocity(st)
    B, Bt = _brackets(st)
    res_a = st.s * adot[:, None] + cross(st.s, B)
    res_b = st.t * bdot[:, None] - cross(st.t, Bt)
    assert np.max(hnorm(res_a)) < 1e-10
    assert np.max(hnorm(res_b)) < 1e-10


def test_velocity_real_reduction_symmetry(breather_state):
    adot, bdot = backlund_velocity(breather_state)
    assert np.max(np.abs(bdot - np.conj(adot))) < 1e-12


def test_zero_spin_error(square_params):
    st = _tw_state(square_params)
    st.s = np.zeros_like(st.s)
    with pytest.raises(ZeroSpinError):
        backlund_velocity(st)


# -- constraints and conserved quantities -------------------------------------


def test_breather_constraints_admitted(breather_state):
    rep = constraint_residuals(breather_state)
    assert rep.max_residual < 1e-10
    assert rep.strip_margin_upper > 0
    assert rep.strip_margin_lower > 0
    assert rep.min_spin_norm > 1.0


def test_breather_total_spin_value(breather_state):
    """Sum s_j = (2 sqrt2 - 4, 0, 0): real, so the family totals match."""
    S, T = breather_state.total_spins()
    expected = np.array([2 * np.sqrt(2) - 4, 0.0, 0.0])
    assert np.max(np.abs(S - expected)) < 1e-12
    assert np.max(np.abs(S - T)) < 1e-13


def test_scaled_spin_breaks_total_spin_constraint(breather_state):
    st = breather_state.copy()
    st.s[0] *= 2.0
    rep = constraint_residuals(st)
    assert rep.total_spin_mismatch > 1.0


def test_conserved_quantities_on_manifold(breather_state):
    q = conserved_quantities(breather_state)
    assert np.max(np.abs(q["P"])) < 1e-12
    assert np.max(np.abs(q["Q"])) < 1e-12
    assert abs(q["R"] - breather_state.rho**2) < 1e-10


def test_R_equals_rho_squared_traveling_wave(square_params):
    st = _tw_state(square_params, rho=1.3 + 0.0j)
    q = conserved_quantities(st)
    assert abs(q["R"] - st.rho**2) < 1e-12


def test_constraint2_is_Q(breather_state):
    rep = constraint_residuals(breather_state)
    q = conserved_quantities(breather_state)
    assert rep.bracket_orthogonality == pytest.approx(float(np.max(np.abs(q["Q"]))), abs=0.0)


# -- frame rotation -----------------------------------------------------------


def test_rotate_frame_zero_is_identity(breather_state):
    st2 = rotate_frame(breather_state, 0.0, 1.7)
    assert np.max(np.abs(st2.s - breather_state.s)) == 0.0
    assert np.max(np.abs(st2.phi - breather_state.phi)) == 0.0


def test_rotate_frame_preserves_dots(breather_state):
    st2 = rotate_frame(breather_state, 0.21 + 0.05j, 0.9)
    g1 = np.einsum("jc,kc->jk", breather_state.s, breather_state.s)
    g2 = np.einsum("jc,kc->jk", st2.s, st2.s)
    assert np.max(np.abs(g1 - g2)) < 1e-12
    rep = constraint_residuals(st2)
    assert rep.max_residual < 1e-10  # constraints are rotation-invariant


# -- serialization ------------------------------------------------------------


def test_state_json_roundtrip(tmp_path, breather_state):
    path = tmp_path / "state.json"
    save_state(breather_state, path)
    st2 = load_state(path)
    assert np.max(np.abs(st2.a - breather_state.a)) == 0.0
    assert np.max(np.abs(st2.s - breather_state.s)) == 0.0
    assert np.max(np.abs(st2.phi - breather_state.phi)) == 0.0
    assert st2.rho == breather_state.rho
    data = json.loads(path.read_text())
    assert data["schema"] == "ncihf-state-v1"
    assert isinstance(data["s"][0][0], list) and len(data["s"][0][0]) == 2


def test_state_dict_complex_pairs(breather_state):
    d = state_to_dict(breather_state)
    st2 = state_from_dict(d)
    assert np.allclose(st2.t, breather_state.t)
