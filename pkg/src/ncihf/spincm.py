"""Constrained elliptic spin Calogero-Moser data model: right-hand sides,
velocity map, constraint residuals, conserved quantities, frame rotations.

Two pole families live in the strip delta/2 < Im a_j < 3*delta/2 and its
mirror image; each family carries null complex spins.  The first-order
velocity map couples the families; the second-order accelerations and the
spin equations act within one family.  `spin_rhs`/`phi_rhs` accept a constant
`shift` added to the interaction potential wp2: shift 0 is the plain CM
normalization, shift = params.field_shift is the frame in which the
reconstructed fields solve the PDE.  Trajectories at different shifts are
related by the global spin rotation exp(2*(shift difference)*t*skew(S)),
with S the conserved total spin (see `rotate_frame`).
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

import numpy as np

from .elliptic import EllipticParams, f2, f2_prime, wp2, wp2_prime, zeta2
from .vec3 import cdot, cross, hdot, spin_rotation

__all__ = [
    "SpinCMState",
    "ConstraintReport",
    "ZeroSpinError",
    "accel",
    "spin_rhs",
    "phi_rhs",
    "backlund_velocity",
    "constraint_residuals",
    "conserved_quantities",
    "rotate_frame",
    "state_to_dict",
    "state_from_dict",
    "save_state",
    "load_state",
]


class ZeroSpinError(ValueError):
    """A spin vector has (numerically) vanishing Hermitian norm."""


@dataclass
class SpinCMState:
    """Full dynamical state: poles, velocities, spins of both families, the
    background vector phi, and the field-length constant rho (admissible
    states reconstruct fields with u.u = v.v = rho^2)."""

    a: np.ndarray
    adot: np.ndarray
    s: np.ndarray
    b: np.ndarray
    bdot: np.ndarray
    t: np.ndarray
    phi: np.ndarray
    rho: complex
    params: EllipticParams
    time: float = 0.0

    def __post_init__(self) -> None:
        self.a = np.atleast_1d(np.asarray(self.a, dtype=complex))
        self.adot = np.atleast_1d(np.asarray(self.adot, dtype=complex))
        self.b = np.atleast_1d(np.asarray(self.b, dtype=complex)) if np.size(self.b) else np.zeros(0, dtype=complex)
        self.bdot = np.atleast_1d(np.asarray(self.bdot, dtype=complex)) if np.size(self.bdot) else np.zeros(0, dtype=complex)
        self.s = np.asarray(self.s, dtype=complex).reshape(len(self.a), 3)
        self.t = np.asarray(self.t, dtype=complex).reshape(len(self.b), 3)
        self.phi = np.asarray(self.phi, dtype=complex).reshape(3)
        self.rho = complex(self.rho)

    @property
    def n_upper(self) -> int:
        return len(self.a)

    @property
    def n_lower(self) -> int:
        return len(self.b)

    def total_spins(self) -> tuple[np.ndarray, np.ndarray]:
        S = self.s.sum(axis=0)
        T = self.t.sum(axis=0) if self.n_lower else np.zeros(3, dtype=complex)
        return S, T

    def is_real_reduction(self, tol: float = 1e-9) -> bool:
        if self.n_upper != self.n_lower:
            return False
        return (
            np.max(np.abs(self.b - np.conj(self.a))) <= tol
            and np.max(np.abs(self.t - np.conj(self.s))) <= tol
            and np.max(np.abs(self.phi.imag)) <= tol
        )

    def copy(self) -> "SpinCMState":
        return SpinCMState(
            a=self.a.copy(), adot=self.adot.copy(), s=self.s.copy(),
            b=self.b.copy(), bdot=self.bdot.copy(), t=self.t.copy(),
            phi=self.phi.copy(), rho=self.rho, params=self.params, time=self.time,
        )


@dataclass(frozen=True)
class ConstraintReport:
    """Residual magnitudes of the four constraint families plus admissibility
    diagnostics (margins may be negative when violated; residuals are >= 0)."""

    spin_null: float            # max |s_j.s_j|, |t_j.t_j|
    bracket_orthogonality: float  # max |Q_j| (same bracket as the velocity map)
    total_spin_mismatch: float  # |sum s - sum t|
    background_closure: float   # |phi^2 - rho^2 - f2 double sums|
    strip_margin_upper: float
    strip_margin_lower: float
    min_pole_separation: float  # min over families and the shifted mixed pairs
    min_spin_norm: float        # min Hermitian norm sqrt(s.s*)

    @property
    def max_residual(self) -> float:
        return max(self.spin_null, self.bracket_orthogonality, self.total_spin_mismatch, self.background_closure)


def _pair_matrix(z: np.ndarray, p: EllipticParams, fn) -> np.ndarray:
    """fn evaluated at z_j - z_k with the diagonal masked out (set to 0)."""
    n = len(z)
    if n < 2:
        return np.zeros((n, n), dtype=complex)
    D = z[:, None] - z[None, :]
    np.fill_diagonal(D, 0.5 * (p.ell + 1j * p.delta))  # safe interior point; masked after
    M = fn(D, p)
    np.fill_diagonal(M, 0.0)
    return M


def accel(state: SpinCMState) -> tuple[np.ndarray, np.ndarray]:
    """Second-order pole accelerations of both families,
    a_j'' = -2 sum_{k != j} (s_j . s_k) wp2'(a_j - a_k)."""
    p = state.params
    out = []
    for z, sp in ((state.a, state.s), (state.b, state.t)):
        wpp = _pair_matrix(z, p, wp2_prime)
        dots = np.einsum("jc,kc->jk", sp, sp)
        out.append(-2.0 * np.sum(dots * wpp, axis=1))
    return out[0], out[1]


def spin_rhs(state: SpinCMState, shift: complex = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """Spin precession s_j' = -2 sum_{k != j} (s_j ^ s_k)(wp2(a_j - a_k) + shift).

    Accumulated pairwise (j < k) with explicit opposite signs so the family
    totals cancel to rounding.
    """
    p = state.params
    out = []
    for z, sp in ((state.a, state.s), (state.b, state.t)):
        n = len(z)
        ds = np.zeros((n, 3), dtype=complex)
        if n >= 2:
            w = _pair_matrix(z, p, wp2)
            for j in range(n):
                for k in range(j + 1, n):
                    contrib = -2.0 * (w[j, k] + shift) * cross(sp[j], sp[k])
                    ds[j] += contrib
                    ds[k] -= contrib
        out.append(ds)
    return out[0], out[1]


def phi_rhs(state: SpinCMState, shift: complex = 0.0) -> np.ndarray:
    """Background dynamics
    phi' = (i/2) sum_{j!=k} s_j^s_k f2'(a_j-a_k) - (i/2) sum_{j!=k} t_j^t_k f2'(b_j-b_k)
           - 2*shift * phi ^ S_gen,
    where S_gen is the mean family total spin (the shift term vanishes at
    shift 0 and implements the rotating-frame correction otherwise)."""
    p = state.params
    terms = []
    for z, sp in ((state.a, state.s), (state.b, state.t)):
        n = len(z)
        acc = np.zeros(3, dtype=complex)
        if n >= 2:
            fp = _pair_matrix(z, p, f2_prime)
            for j in range(n):
                for k in range(j + 1, n):
                    # (j,k) and (k,j) contribute equally: f2' odd, wedge antisymmetric
                    acc += 1j * fp[j, k] * cross(sp[j], sp[k])
        terms.append(acc)
    out = terms[0] - terms[1]
    if shift != 0.0:
        S, T = state.total_spins()
        s_gen = 0.5 * (S + T) if state.n_lower else S
        out = out - 2.0 * shift * cross(state.phi, s_gen)
    return out


def _brackets(state: SpinCMState) -> tuple[np.ndarray, np.ndarray]:
    """The bracket vectors of the velocity map / orthogonality constraint:
    B_j   = i phi - sum_{k != j} s_k zeta2(a_j - a_k) + sum_k t_k zeta2(a_j - b_k + i delta)
    Bt_j  = i phi + sum_{k != j} t_k zeta2(b_j - b_k) - sum_k s_k zeta2(b_j - a_k + i delta)
    """
    p = state.params
    a, b, s, t, phi = state.a, state.b, state.s, state.t, state.phi
    Zaa = _pair_matrix(a, p, zeta2)
    B = 1j * phi[None, :] - np.einsum("jk,kc->jc", Zaa, s)
    if state.n_lower:
        Zab = zeta2(a[:, None] - b[None, :] + 1j * p.delta, p)
        B = B + np.einsum("jk,kc->jc", Zab, t)
        Zbb = _pair_matrix(b, p, zeta2)
        Zba = zeta2(b[:, None] - a[None, :] + 1j * p.delta, p)
        Bt = 1j * phi[None, :] + np.einsum("jk,kc->jc", Zbb, t) - np.einsum("jk,kc->jc", Zba, s)
    else:
        Bt = np.zeros((0, 3), dtype=complex)
    return B, Bt


def backlund_velocity(state: SpinCMState, norm_floor: float = 1e-12) -> tuple[np.ndarray, np.ndarray]:
    """Pole velocities from the first-order flow:
    a_j' = -(s_j ^ B_j) . s_j* / (s_j . s_j*),  b_j' = +(t_j ^ Bt_j) . t_j* / (t_j . t_j*).

    Under the null-spin and orthogonality constraints s_j ^ B_j is parallel to
    s_j, so this scalar reproduces the wedge equation exactly."""
    for sp in (state.s, state.t):
        if len(sp) and np.min(np.real(hdot(sp, sp))) < norm_floor:
            raise ZeroSpinError("spin Hermitian norm below floor; velocity map undefined")
    B, Bt = _brackets(state)
    adot = -np.einsum("jc,jc->j", cross(state.s, B), np.conj(state.s)) / hdot(state.s, state.s)
    if state.n_lower:
        bdot = +np.einsum("jc,jc->j", cross(state.t, Bt), np.conj(state.t)) / hdot(state.t, state.t)
    else:
        bdot = np.zeros(0, dtype=complex)
    return adot, bdot


def _min_separation(state: SpinCMState) -> float:
    """Minimum pairwise pole distance mod the lattice (within families, and
    for the i*delta-shifted mixed pairs)."""
    p = state.params
    best = np.inf
    for z in (state.a, state.b):
        n = len(z)
        if n >= 2:
            D = z[:, None] - z[None, :]
            iu = np.triu_indices(n, k=1)
            red, _, _ = p._reduce(D[iu])
            best = min(best, float(np.min(np.abs(red))))
    if state.n_upper and state.n_lower:
        D = state.a[:, None] - state.b[None, :] + 1j * p.delta
        red, _, _ = p._reduce(D.ravel())
        best = min(best, float(np.min(np.abs(red))))
    return best


def constraint_residuals(state: SpinCMState) -> ConstraintReport:
    """Evaluate all constraint residuals and admissibility diagnostics."""
    p = state.params
    c1 = 0.0
    for sp in (state.s, state.t):
        if len(sp):
            c1 = max(c1, float(np.max(np.abs(cdot(sp, sp)))))
    B, Bt = _brackets(state)
    q_upper = np.einsum("jc,jc->j", state.s, B)
    q_lower = np.einsum("jc,jc->j", state.t, Bt) if state.n_lower else np.zeros(0, dtype=complex)
    c2 = float(max(np.max(np.abs(q_upper)), np.max(np.abs(q_lower)) if len(q_lower) else 0.0))
    S, T = state.total_spins()
    c3 = float(np.linalg.norm(S - T))
    c4 = float(abs(_background_closure(state)))
    ima = state.a.imag
    strip_a = float(np.min(np.minimum(ima - p.delta / 2, 3 * p.delta / 2 - ima)))
    if state.n_lower:
        imb = state.b.imag
        strip_b = float(np.min(np.minimum(-p.delta / 2 - imb, imb + 3 * p.delta / 2)))
    else:
        strip_b = np.inf
    norms = [float(np.min(np.sqrt(np.real(hdot(sp, sp))))) for sp in (state.s, state.t) if len(sp)]
    return ConstraintReport(
        spin_null=c1,
        bracket_orthogonality=c2,
        total_spin_mismatch=c3,
        background_closure=c4,
        strip_margin_upper=strip_a,
        strip_margin_lower=strip_b,
        min_pole_separation=_min_separation(state),
        min_spin_norm=min(norms) if norms else np.inf,
    )


def _f2_sums(state: SpinCMState) -> complex:
    """(1/2) sum_{j!=k} s_j.s_k f2(a_j-a_k) + (1/2) sum_{j!=k} t_j.t_k f2(b_j-b_k)
       - sum_{j,k} s_j.t_k f2(a_j - b_k + i delta)."""
    p = state.params
    tot = 0.0 + 0.0j
    for z, sp in ((state.a, state.s), (state.b, state.t)):
        if len(z) >= 2:
            F = _pair_matrix(z, p, f2)
            dots = np.einsum("jc,kc->jk", sp, sp)
            tot += 0.5 * np.sum(dots * F)
    if state.n_upper and state.n_lower:
        F = f2(state.a[:, None] - state.b[None, :] + 1j * p.delta, p)
        dots = np.einsum("jc,kc->jk", state.s, state.t)
        tot -= np.sum(dots * F)
    return tot


def _background_closure(state: SpinCMState) -> complex:
    return cdot(state.phi, state.phi) - state.rho**2 - _f2_sums(state)


def conserved_quantities(state: SpinCMState) -> dict[str, Any]:
    """P_j = s_j^2 (both families), Q_j = bracket pairings, the background
    invariant R (equal to rho^2 on the constraint manifold), and the family
    total spins."""
    P = np.concatenate([cdot(state.s, state.s), cdot(state.t, state.t) if state.n_lower else np.zeros(0, dtype=complex)])
    B, Bt = _brackets(state)
    Q = np.concatenate([
        np.einsum("jc,jc->j", state.s, B),
        np.einsum("jc,jc->j", state.t, Bt) if state.n_lower else np.zeros(0, dtype=complex),
    ])
    R = cdot(state.phi, state.phi) - _f2_sums(state)
    S, T = state.total_spins()
    return {"P": P, "Q": Q, "R": complex(R), "S": S, "T": T}


def rotate_frame(state: SpinCMState, c: complex, elapsed: float) -> SpinCMState:
    """Rotate every spin and the background by exp(2*c*elapsed*skew(S)), with
    S the conserved total spin of the upper family.  Maps a trajectory of the
    shift-0 equations onto the trajectory of the shift-c equations."""
    S, _ = state.total_spins()
    R = spin_rotation(S, 2.0 * c * elapsed)
    new = state.copy()
    new.s = state.s @ R.T
    if state.n_lower:
        new.t = state.t @ R.T
    new.phi = R @ state.phi
    return new


# -- JSON serialization ------------------------------------------------------


def _c2pair(z: complex) -> list[float]:
    return [float(np.real(z)), float(np.imag(z))]


def _carr(arr: np.ndarray) -> list:
    if arr.ndim == 1:
        return [_c2pair(z) for z in arr]
    return [[_c2pair(z) for z in row] for row in arr]


def _parr(data, shape_hint: int | None = None) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.size == 0:
        return np.zeros((0, 3) if shape_hint == 3 else 0, dtype=complex)
    return arr[..., 0] + 1j * arr[..., 1]


def state_to_dict(state: SpinCMState) -> dict[str, Any]:
    """JSON-ready dict; complex numbers as [re, im] pairs."""
    return {
        "schema": "ncihf-state-v1",
        "time": state.time,
        "ell": state.params.ell,
        "delta": state.params.delta,
        "rho": _c2pair(state.rho),
        "a": _carr(state.a),
        "adot": _carr(state.adot),
        "s": _carr(state.s),
        "b": _carr(state.b),
        "bdot": _carr(state.bdot),
        "t": _carr(state.t),
        "phi": _carr(state.phi),
    }


def state_from_dict(data: dict[str, Any]) -> SpinCMState:
    params = EllipticParams(ell=float(data["ell"]), delta=float(data["delta"]))
    return SpinCMState(
        a=_parr(data["a"]),
        adot=_parr(data["adot"]),
        s=_parr(data["s"], 3),
        b=_parr(data["b"]),
        bdot=_parr(data["bdot"]),
        t=_parr(data["t"], 3),
        phi=_parr(data["phi"]),
        rho=complex(data["rho"][0], data["rho"][1]),
        params=params,
        time=float(data["time"]),
    )


def save_state(state: SpinCMState, path) -> None:
    with open(path, "w") as fh:
        json.dump(state_to_dict(state), fh, indent=1)


def load_state(path) -> SpinCMState:
    with open(path) as fh:
        return state_from_dict(json.load(fh))
