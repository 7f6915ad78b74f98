"""Adaptive time evolution of spin-pole states with admissibility events.

Two evolution modes:
  * "second-order": poles follow their accelerations; spins and background
    follow their first-order equations.
  * "first-order-backlund": pole velocities are re-derived from the coupling
    brackets at every evaluation, so the second-order equations become a
    testable consequence rather than an input.

The spin/background frame is set by `frame`: "field" uses the zero-mean
potential shift (the reconstructed fields then solve the PDE), "cm" uses the
plain spin Calogero-Moser normalization; a numeric value selects any constant
potential shift (used by the rotating-frame equivalence tests).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp

from .spincm import (
    SpinCMState,
    accel,
    backlund_velocity,
    conserved_quantities,
    constraint_residuals,
    phi_rhs,
    spin_rhs,
    state_to_dict,
)
from .vec3 import hdot

__all__ = [
    "IntegratorConfig",
    "Trajectory",
    "AdmissionError",
    "integrate",
    "conservation_drift",
    "backlund_consistency",
    "trajectory_to_csv",
    "trajectory_to_json",
]


class AdmissionError(ValueError):
    """Initial state violates the constraint admission threshold."""


@dataclass(frozen=True)
class IntegratorConfig:
    mode: str = "second-order"  # or "first-order-backlund"
    frame: str | float | complex = "field"  # "field" | "cm" | numeric shift
    rel_tol: float = 1e-10
    abs_tol: float = 1e-10
    max_step: float = np.inf
    min_step: float = 0.0
    real_mode: bool = False
    admission_tol: float | None = 1e-8
    strip_margin: float = 1e-6
    separation_margin: float = 1e-9
    spin_norm_margin: float = 1e-10
    method: str = "DOP853"
    with_events: bool = True

    def __post_init__(self) -> None:
        if self.mode not in ("second-order", "first-order-backlund"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("tolerances must be positive")
        if not self.min_step < self.max_step:
            raise ValueError("min_step must be below max_step")

    def shift_for(self, state: SpinCMState) -> complex:
        if self.frame == "field":
            return state.params.field_shift
        if self.frame == "cm":
            return 0.0
        return complex(self.frame)


@dataclass
class Trajectory:
    times: np.ndarray
    states: list[SpinCMState]
    termination: str  # "time-limit" | "admissibility-event" | "step-failure"
    config: IntegratorConfig
    event_time: float | None = None
    message: str = ""
    n_rhs_evals: int = 0
    _dense: Callable[[float], np.ndarray] | None = field(default=None, repr=False)
    _packer: "_Packer | None" = field(default=None, repr=False)

    def state_at(self, t: float) -> SpinCMState:
        """Dense-output interpolation (available on freshly computed trajectories)."""
        if self._dense is None or self._packer is None:
            raise ValueError("trajectory has no dense output")
        return self._packer.unpack(t, self._dense(t))


class _Packer:
    """Flatten states to real vectors and back, per mode and reduction."""

    def __init__(self, template: SpinCMState, mode: str, real_mode: bool):
        self.mode = mode
        self.real_mode = real_mode
        self.params = template.params
        self.rho = template.rho
        self.n_upper = template.n_upper
        self.n_lower = template.n_lower
        if real_mode and template.n_upper != template.n_lower:
            raise ValueError("real_mode requires equal family sizes")

    def pack(self, st: SpinCMState) -> np.ndarray:
        second = self.mode == "second-order"
        if self.real_mode:
            parts = [st.a.view(float)]
            if second:
                parts.append(st.adot.view(float))
            parts += [st.s.ravel().view(float), st.phi.real]
        else:
            parts = [st.a.view(float)]
            if second:
                parts.append(st.adot.view(float))
            parts.append(st.b.view(float))
            if second:
                parts.append(st.bdot.view(float))
            parts += [st.s.ravel().view(float), st.t.ravel().view(float), st.phi.view(float)]
        return np.concatenate(parts)

    def unpack(self, t: float, y: np.ndarray) -> SpinCMState:
        y = np.ascontiguousarray(y)
        N, M = self.n_upper, self.n_lower
        second = self.mode == "second-order"
        k = 0

        def take(n_complex: int) -> np.ndarray:
            nonlocal k
            out = y[k : k + 2 * n_complex].view(complex)
            k += 2 * n_complex
            return out

        if self.real_mode:
            a = take(N)
            adot = take(N) if second else np.zeros(N, dtype=complex)
            s = take(3 * N).reshape(N, 3)
            phi = y[k : k + 3].astype(complex)
            st = SpinCMState(a=a, adot=adot, s=s, b=np.conj(a), bdot=np.conj(adot),
                             t=np.conj(s), phi=phi, rho=self.rho, params=self.params, time=t)
        else:
            a = take(N)
            adot = take(N) if second else np.zeros(N, dtype=complex)
            b = take(M)
            bdot = take(M) if second else np.zeros(M, dtype=complex)
            s = take(3 * N).reshape(N, 3)
            tt = take(3 * M).reshape(M, 3)
            phi = take(3)
            st = SpinCMState(a=a, adot=adot, s=s, b=b, bdot=bdot, t=tt,
                             phi=phi, rho=self.rho, params=self.params, time=t)
        if not second:
            ad, bd = backlund_velocity(st)
            st.adot, st.bdot = ad, bd
        return st


def _make_rhs(packer: _Packer, shift: complex):
    second = packer.mode == "second-order"

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        st = packer.unpack(t, y)
        ds, dt = spin_rhs(st, shift)
        dphi = phi_rhs(st, shift)
        if second:
            acc_a, acc_b = accel(st)
            da, db = st.adot, st.bdot
        else:
            da, db = st.adot, st.bdot  # backlund_velocity applied in unpack
        if packer.real_mode:
            parts = [da.view(float)]
            if second:
                parts.append(acc_a.view(float))
            parts += [ds.ravel().view(float), dphi.real]
        else:
            parts = [da.view(float)]
            if second:
                parts.append(acc_a.view(float))
            parts.append(db.view(float))
            if second:
                parts.append(acc_b.view(float))
            parts += [ds.ravel().view(float), dt.ravel().view(float), dphi.view(float)]
        return np.concatenate(parts)

    return rhs


def _make_events(packer: _Packer, cfg: IntegratorConfig):
    p = packer.params

    def strip_margin(t, y):
        st = packer.unpack(t, y)
        m = np.min(np.minimum(st.a.imag - p.delta / 2, 3 * p.delta / 2 - st.a.imag))
        if st.n_lower:
            m = min(m, np.min(np.minimum(-p.delta / 2 - st.b.imag, st.b.imag + 3 * p.delta / 2)))
        return m - cfg.strip_margin

    def separation(t, y):
        from .spincm import _min_separation

        return _min_separation(packer.unpack(t, y)) - cfg.separation_margin

    def spin_norm(t, y):
        st = packer.unpack(t, y)
        m = np.min(np.real(hdot(st.s, st.s)))
        if st.n_lower:
            m = min(m, np.min(np.real(hdot(st.t, st.t))))
        return m - cfg.spin_norm_margin

    events = []
    for fn, name in ((strip_margin, "strip"), (separation, "separation"), (spin_norm, "spin-norm")):
        fn.terminal = True  # type: ignore[attr-defined]
        fn.direction = -1  # type: ignore[attr-defined]
        fn.event_name = name  # type: ignore[attr-defined]
        events.append(fn)
    return events


def integrate(
    state0: SpinCMState,
    t_end: float,
    config: IntegratorConfig | None = None,
    t_eval: np.ndarray | None = None,
    n_snapshots: int = 129,
) -> Trajectory:
    """Evolve `state0` to `t_end`, returning snapshots at `t_eval` (default: a
    uniform grid of `n_snapshots` points).  Terminates early on admissibility
    events; the last reported snapshot never violates the strip condition by
    more than the configured margin."""
    cfg = config or IntegratorConfig()
    if cfg.admission_tol is not None:
        rep = constraint_residuals(state0)
        if rep.max_residual > cfg.admission_tol:
            raise AdmissionError(
                f"constraint residual {rep.max_residual:.3e} above admission tolerance {cfg.admission_tol:.1e}"
            )
    if cfg.real_mode and not state0.is_real_reduction(tol=1e-6):
        raise AdmissionError("real_mode requires b = conj(a), t = conj(s), phi real")

    packer = _Packer(state0, cfg.mode, cfg.real_mode)
    shift = cfg.shift_for(state0)
    rhs = _make_rhs(packer, shift)
    t0 = state0.time
    if t_eval is None:
        t_eval = np.linspace(t0, t_end, n_snapshots)
    sol = solve_ivp(
        rhs,
        (t0, t_end),
        packer.pack(state0),
        method=cfg.method,
        rtol=cfg.rel_tol,
        atol=cfg.abs_tol,
        max_step=cfg.max_step,
        t_eval=np.asarray(t_eval, dtype=float),
        dense_output=True,
        events=_make_events(packer, cfg) if cfg.with_events else None,
    )
    if sol.status == 0:
        termination = "time-limit"
        event_time = None
    elif sol.status == 1:
        termination = "admissibility-event"
        event_time = float(min(te[0] for te in sol.t_events if len(te)))
    else:
        termination = "step-failure"
        event_time = None
    times = sol.t
    states = [packer.unpack(tt, sol.y[:, i]) for i, tt in enumerate(times)]
    if termination == "admissibility-event" and (len(times) == 0 or times[-1] < event_time):
        # include the located event state itself
        states.append(packer.unpack(event_time, sol.sol(event_time)))
        times = np.append(times, event_time)
    return Trajectory(
        times=np.asarray(times),
        states=states,
        termination=termination,
        config=cfg,
        event_time=event_time,
        message=sol.message,
        n_rhs_evals=sol.nfev,
        _dense=sol.sol,
        _packer=packer,
    )


def conservation_drift(traj: Trajectory) -> dict[str, float]:
    """Max absolute drift of every conserved quantity over the trajectory."""
    if not traj.states:
        raise ValueError("empty trajectory")
    qs = [conserved_quantities(st) for st in traj.states]
    q0 = qs[0]
    drift = {
        "P": max(float(np.max(np.abs(q["P"] - q0["P"]))) if len(q0["P"]) else 0.0 for q in qs),
        "Q": max(float(np.max(np.abs(q["Q"] - q0["Q"]))) if len(q0["Q"]) else 0.0 for q in qs),
        "R": max(abs(q["R"] - q0["R"]) for q in qs),
        "S": max(float(np.max(np.abs(q["S"] - q0["S"]))) for q in qs),
        "T": max(float(np.max(np.abs(q["T"] - q0["T"]))) for q in qs),
        "S_minus_T": max(float(np.max(np.abs((q["S"] - q["T"]) - (q0["S"] - q0["T"])))) for q in qs),
    }
    return drift


def backlund_consistency(traj: Trajectory) -> dict[str, float]:
    """Central finite-difference pole accelerations against the second-order
    right-hand side, along a uniformly sampled trajectory."""
    if len(traj.states) < 3:
        raise ValueError("need at least three uniformly spaced snapshots")
    dts = np.diff(traj.times)
    if np.max(np.abs(dts - dts[0])) > 1e-9 * max(abs(dts[0]), 1e-300):
        raise ValueError("snapshots must be uniformly spaced")
    dt = dts[0]
    max_abs = 0.0
    max_rel = 0.0
    for i in range(1, len(traj.states) - 1):
        st = traj.states[i]
        poles = np.concatenate([st.a, st.b])
        prev = np.concatenate([traj.states[i - 1].a, traj.states[i - 1].b])
        nxt = np.concatenate([traj.states[i + 1].a, traj.states[i + 1].b])
        fd = (nxt - 2 * poles + prev) / dt**2
        acc_a, acc_b = accel(st)
        acc = np.concatenate([acc_a, acc_b])
        err = np.abs(fd - acc)
        max_abs = max(max_abs, float(np.max(err)))
        max_rel = max(max_rel, float(np.max(err / np.maximum(np.abs(acc), 1.0))))
    return {"max_abs": max_abs, "max_rel": max_rel}


# -- export ------------------------------------------------------------------


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def trajectory_columns(n_upper: int, n_lower: int) -> list[str]:
    cols = ["t"]
    for j in range(1, n_upper + 1):
        cols += [f"a{j}_re", f"a{j}_im", f"adot{j}_re", f"adot{j}_im"]
    for j in range(1, n_lower + 1):
        cols += [f"b{j}_re", f"b{j}_im", f"bdot{j}_re", f"bdot{j}_im"]
    for j in range(1, n_upper + 1):
        for c in ("x", "y", "z"):
            cols += [f"s{j}{c}_re", f"s{j}{c}_im"]
    for j in range(1, n_lower + 1):
        for c in ("x", "y", "z"):
            cols += [f"t{j}{c}_re", f"t{j}{c}_im"]
    for c in ("x", "y", "z"):
        cols += [f"phi{c}_re", f"phi{c}_im"]
    return cols


def trajectory_to_csv(traj: Trajectory, path) -> None:
    """One row per snapshot: t, then poles/velocities/spins/background as
    re/im pairs, 17 significant digits (schema in README)."""
    st0 = traj.states[0]
    cols = trajectory_columns(st0.n_upper, st0.n_lower)
    with open(path, "w") as fh:
        fh.write(",".join(cols) + "\n")
        for tt, st in zip(traj.times, traj.states):
            vals = [tt]
            for j in range(st.n_upper):
                vals += [st.a[j].real, st.a[j].imag, st.adot[j].real, st.adot[j].imag]
            for j in range(st.n_lower):
                vals += [st.b[j].real, st.b[j].imag, st.bdot[j].real, st.bdot[j].imag]
            for j in range(st.n_upper):
                vals += [v for c in range(3) for v in (st.s[j, c].real, st.s[j, c].imag)]
            for j in range(st.n_lower):
                vals += [v for c in range(3) for v in (st.t[j, c].real, st.t[j, c].imag)]
            vals += [v for c in range(3) for v in (st.phi[c].real, st.phi[c].imag)]
            fh.write(",".join(_fmt(v) for v in vals) + "\n")


def trajectory_to_json(traj: Trajectory, path) -> None:
    data = {
        "schema": "ncihf-trajectory-v1",
        "termination": traj.termination,
        "event_time": traj.event_time,
        "states": [state_to_dict(st) for st in traj.states],
    }
    with open(path, "w") as fh:
        json.dump(data, fh, indent=1)
