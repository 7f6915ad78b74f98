"""Command-line entry point: identity validation, the reference experiments
(breather, counter-propagating waves, Jacobi data), and residual
certification of exported runs.

Exit codes: 0 ok, 1 check failure, 2 usage/config error.
Verbosity via the NCIHF_LOG environment variable (DEBUG/INFO/WARNING).
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time as _time
from pathlib import Path

import numpy as np
from scipy.optimize import minimize_scalar

from . import __version__
from .ansatz import energy_density, eval_field, uniform_grid
from .elliptic import EllipticParams, ellip_K, f2, f2_prime, jacobi_cn, jacobi_sn, wp1, wp2, wp2_prime, zeta1, zeta2
from .initialdata import ConfigError, JacobiConfig, TravelingWaveConfig, jacobi_state, traveling_wave_state
from .integrator import (
    IntegratorConfig,
    Trajectory,
    conservation_drift,
    integrate,
    trajectory_to_csv,
    trajectory_to_json,
)
from .pde_oracle import OperatorEvaluator, pde_residual
from .spincm import SpinCMState, save_state, state_from_dict

log = logging.getLogger("ncihf")

_FMT = ".17g"


def _fmt(x: float) -> str:
    return format(float(x), _FMT)


# ---------------------------------------------------------------------------
# validate
# ---------------------------------------------------------------------------


def _identity_checks(params: EllipticParams, grid_n: int, rng: np.random.Generator) -> list[dict]:
    """The named identity/property battery.  Every check is a residual with an
    explicit tolerance; fault injection corrupts the cached lattice constants
    upstream, which these checks then catch."""
    p = params
    checks: list[dict] = []

    def add(name: str, value: float, tol: float) -> None:
        checks.append({"name": name, "value": float(value), "tol": tol, "pass": bool(value <= tol)})

    def sample(n: int) -> np.ndarray:
        pts = []
        while len(pts) < n:
            z = complex(rng.uniform(-p.ell, p.ell), rng.uniform(-p.delta, p.delta))
            z0, _, _ = p._reduce(np.asarray(z))
            if abs(complex(z0)) > 0.15:
                pts.append(z)
        return np.asarray(pts)

    z = sample(100)
    add("legendre-relation", abs(p.eta_ell * 1j * p.delta - p.eta_idelta * p.ell - 1j * np.pi / 2), 1e-10)
    add("zeta2-odd-parity", np.max(np.abs(zeta2(-z, p) + zeta2(z, p))), 1e-10)
    add("wp2-even-parity", np.max(np.abs(wp2(-z, p) - wp2(z, p))), 1e-10)
    add("f2-even-parity", np.max(np.abs(f2(-z, p) - f2(z, p))), 1e-10)
    add("f2prime-odd-parity", np.max(np.abs(f2_prime(-z, p) + f2_prime(z, p))), 1e-10)
    add("zeta1-real-period", np.max(np.abs(zeta1(z + 2 * p.ell, p) - zeta1(z, p))), 1e-10)
    add("zeta2-imag-period", np.max(np.abs(zeta2(z + 2j * p.delta, p) - zeta2(z, p))), 1e-10)
    add(
        "zeta2-real-quasi-period",
        np.max(np.abs(zeta2(z + 2 * p.ell, p) - zeta2(z, p) - np.pi / p.delta)),
        1e-10,
    )
    add("wp2-double-periodicity",
        max(np.max(np.abs(wp2(z + 2 * p.ell, p) - wp2(z, p))), np.max(np.abs(wp2(z + 2j * p.delta, p) - wp2(z, p)))),
        1e-10)
    add(
        "f2-real-quasi-period",
        np.max(np.abs(f2(z + 2 * p.ell, p) - f2(z, p) - (2 * np.pi / p.delta) * zeta2(z, p) - (np.pi / p.delta) ** 2)),
        1e-10,
    )
    add("square-identity", np.max(np.abs(zeta2(z, p) ** 2 - wp2(z, p) - f2(z, p))), 1e-10)

    # addition identity at random well-separated triples
    worst = 0.0
    const = 1.5 * p.eta_idelta / (1j * p.delta)
    count = 0
    while count < 100:
        zz, aa, bb = sample(3)
        if min(abs(zz - aa), abs(zz - bb), abs(aa - bb)) < 0.25:
            continue
        lhs = zeta2(zz - aa, p) * zeta2(zz - bb, p)
        rhs = (
            zeta2(aa - bb, p) * (zeta2(zz - aa, p) - zeta2(zz - bb, p))
            + 0.5 * (f2(zz - aa, p) + f2(zz - bb, p) + f2(aa - bb, p))
            + const
        )
        worst = max(worst, abs(lhs - rhs))
        count += 1
    add("addition-identity", worst, 1e-10)

    add(
        "zeta2-wp2-product-identity",
        np.max(np.abs(zeta2(z, p) * wp2(z, p) + 0.5 * (wp2_prime(z, p) + f2_prime(z, p)))),
        1e-10,
    )
    h = 1e-5
    zd = sample(20)
    add(
        "wp2-is-minus-zeta2-derivative",
        np.max(np.abs((-(zeta2(zd + h, p) - zeta2(zd - h, p)) / (2 * h) - wp2(zd, p)) / wp2(zd, p))),
        1e-6,
    )

    # pair-product identities of the two-channel building blocks
    x = sample(50).real

    def pair(fn, aj, sign):
        hd = 0.5j * p.delta * sign
        return np.stack([fn(x - aj + hd, p), fn(x - aj - hd, p)], axis=-1)

    worst = 0.0
    for rj in (+1, -1):
        aj = 0.3 + 1.05j * p.delta * rj
        A = pair(zeta2, aj, rj)
        Ap = -pair(wp2, aj, rj)
        F = pair(f2, aj, rj)
        worst = max(worst, float(np.max(np.abs(A * A - (-Ap + F)))))
    add("same-pole-pair-product", worst, 1e-10)

    worst = 0.0
    for rj, rk in ((+1, +1), (+1, -1), (-1, +1), (-1, -1)):
        aj = 0.31 + 1.07j * p.delta * rj
        ak = -0.83 + 0.94j * p.delta * rk
        atj, atk = aj - 0.5j * rj * p.delta, ak - 0.5j * rk * p.delta
        A_j, A_k = pair(zeta2, aj, rj), pair(zeta2, ak, rk)
        F_j, F_k = pair(f2, aj, rj), pair(f2, ak, rk)
        rhs = zeta2(atj - atk, p) * (A_j - A_k) + 0.5 * (F_j + F_k) + f2(atj - atk, p) / 2 + const
        worst = max(worst, float(np.max(np.abs(A_j * A_k - rhs))))
    add("cross-pole-pair-product", worst, 1e-10)

    # operator eigenfunction relation on zero-mean pairs, both methods
    for method in ("pv", "spectral"):
        ev = OperatorEvaluator(p, n=grid_n, method=method)
        xg = ev.x
        worst = 0.0
        for r in (+1, -1):
            pole = 0.4 + 1.1j * p.delta * r
            up = -wp1(xg - pole + 1j * r * p.delta / 2, p)
            dn = -wp1(xg - pole - 1j * r * p.delta / 2, p)
            fu = np.zeros((grid_n, 3), dtype=complex)
            fv = np.zeros((grid_n, 3), dtype=complex)
            fu[:, 0], fv[:, 0] = up, dn
            row_u, row_v = ev.apply_rows(fu, fv)
            worst = max(worst, float(np.max(np.abs(row_u[:, 0] - (-1j * r) * up))))
            worst = max(worst, float(np.max(np.abs(row_v[:, 0] - (-1j * r) * dn))))
        add(f"eigenrelation-{method}", worst, 1e-8)

    ev1 = OperatorEvaluator(p, n=grid_n, method="pv")
    ev2 = OperatorEvaluator(p, n=grid_n, method="spectral")
    xg = ev1.x
    f = np.zeros(grid_n, dtype=complex)
    for n_mode in range(1, 16):
        f += rng.normal() * np.cos(np.pi * n_mode * xg / p.ell) + 1j * rng.normal() * np.sin(np.pi * n_mode * xg / p.ell)
    add("operator-methods-agree",
        max(float(np.max(np.abs(ev1.apply_T(f) - ev2.apply_T(f)))),
            float(np.max(np.abs(ev1.apply_Ttilde(f) - ev2.apply_Ttilde(f))))),
        1e-8)
    one = np.ones(grid_n, dtype=complex)
    add("shifted-kernel-constant-mode", float(np.max(np.abs(ev1.apply_Ttilde(one) + 1j))), 1e-10)
    add("pv-kernel-kills-constants", float(np.max(np.abs(ev1.apply_T(one)))), 1e-12)

    # Jacobi function facts
    m = 0.5
    zc = rng.uniform(-1.5, 1.5, 40) + 1j * rng.uniform(-0.6, 0.6, 40)
    add("sn2-plus-cn2", float(np.max(np.abs(jacobi_sn(zc, m) ** 2 + jacobi_cn(zc, m) ** 2 - 1))), 1e-10)
    Kp = ellip_K(1 - m)
    th = 2 * np.pi * np.arange(64) / 64
    circ = 1j * Kp + 1e-3 * np.exp(1j * th)
    res_sn = np.mean(jacobi_sn(circ, m, guard=1e-6) * (circ - 1j * Kp))
    res_cn = np.mean(jacobi_cn(circ, m, guard=1e-6) * (circ - 1j * Kp))
    add("jacobi-residues", max(abs(res_sn - 1 / np.sqrt(m)), abs(res_cn + 1j / np.sqrt(m))), 1e-8)
    from scipy.integrate import quad

    val, _ = quad(lambda t_: 1.0 / np.sqrt(1 - m * np.sin(t_) ** 2), 0, np.pi / 2, epsabs=1e-14)
    add("elliptic-K-agm-vs-quadrature", abs(ellip_K(m) - val), 1e-12)
    return checks


def cmd_validate(args) -> int:
    params = EllipticParams(ell=args.ell, delta=args.delta)
    if args.perturb:
        # fault injection: corrupt a cached lattice constant; the battery must notice
        object.__setattr__(params, "eta_idelta", params.eta_idelta + args.perturb)
    rng = np.random.default_rng(12345)
    t0 = _time.perf_counter()
    checks = _identity_checks(params, args.grid_n, rng)
    elapsed = _time.perf_counter() - t0
    ok = all(c["pass"] for c in checks)
    report = {
        "command": "validate",
        "version": __version__,
        "ell": params.ell,
        "delta": params.delta,
        "perturb": args.perturb,
        "n_checks": len(checks),
        "all_pass": ok,
        "elapsed_s": elapsed,
        "checks": checks,
    }
    payload = json.dumps(report, indent=1, sort_keys=True)
    if args.out:
        Path(args.out).mkdir(parents=True, exist_ok=True)
        (Path(args.out) / "validate_report.json").write_text(payload)
    print(payload)
    for c in checks:
        log.info("%-32s %.3e (tol %.1e) %s", c["name"], c["value"], c["tol"], "ok" if c["pass"] else "FAIL")
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# experiment runners
# ---------------------------------------------------------------------------


def _detect_pole_period(traj: Trajectory) -> dict | None:
    """Return-map period of the most mobile pole: distance in (a_j, adot_j)
    back to the initial point, coarse scan + bounded refinement."""
    a0 = traj.states[0].a
    disp = np.max(np.abs(np.stack([st.a for st in traj.states]) - a0[None, :]), axis=0)
    j = int(np.argmax(disp))
    if disp[j] < 1e-8:
        return None
    ref_a, ref_ad = traj.states[0].a[j], traj.states[0].adot[j]
    scale = max(float(disp[j]), 1e-6)

    def g(tt: float) -> float:
        st = traj.state_at(float(tt))
        return float(abs(st.a[j] - ref_a) + abs(st.adot[j] - ref_ad))

    t_lo, t_hi = 0.25 * (traj.times[-1] - traj.times[0]), traj.times[-1]
    ts = np.arange(t_lo, t_hi, 0.02)
    if len(ts) < 3:
        return None
    vals = np.array([g(tt) for tt in ts])
    i = int(np.argmin(vals))
    if i in (0, len(ts) - 1):
        return None
    res = minimize_scalar(g, bounds=(ts[i] - 0.02, ts[i] + 0.02), method="bounded",
                          options={"xatol": 1e-10})
    if res.fun > 1e-3 * scale:
        return None
    return {"pole_index": j, "period": float(res.x), "return_distance": float(res.fun)}


def _detect_energy_period(traj: Trajectory, grid_n: int = 128) -> dict | None:
    """Smallest tau with eps_total(., t0 + tau) = eps_total(., t0)."""
    st0 = traj.states[0]
    if not st0.is_real_reduction():
        return None
    x = uniform_grid(st0.params, grid_n)
    eu0, ev0 = energy_density(st0, x)
    e0 = eu0 + ev0
    scale = max(float(np.max(np.abs(e0))), 1e-12)

    def d(tau: float) -> float:
        st = traj.state_at(float(traj.times[0] + tau))
        eu, ev = energy_density(st, x)
        return float(np.max(np.abs(eu + ev - e0)))

    horizon = traj.times[-1] - traj.times[0]
    taus = np.arange(0.5, horizon, 0.05)
    if len(taus) < 3:
        return None
    vals = np.array([d(tt) for tt in taus])
    i = int(np.argmin(vals))
    if i in (0, len(taus) - 1):
        return None
    res = minimize_scalar(d, bounds=(taus[i] - 0.05, taus[i] + 0.05), method="bounded",
                          options={"xatol": 1e-10})
    if res.fun > 1e-3 * scale:
        return None
    return {"period": float(res.x), "mismatch": float(res.fun)}


def _write_fields_csv(path: Path, state: SpinCMState, grid_n: int) -> None:
    x = uniform_grid(state.params, grid_n)
    sample = eval_field(state, x)
    real = state.is_real_reduction()
    if real:
        eps_u, eps_v = energy_density(state, x)
    cols = ["x"]
    for f in ("u", "v"):
        for c in ("1", "2", "3"):
            cols += [f"{f}{c}_re", f"{f}{c}_im"]
    cols += ["usq_re", "usq_im", "eps_u", "eps_v"]
    with open(path, "w") as fh:
        fh.write(",".join(cols) + "\n")
        for i in range(grid_n):
            vals = [x[i]]
            for arr in (sample.u, sample.v):
                for c in range(3):
                    vals += [arr[i, c].real, arr[i, c].imag]
            vals += [sample.u_sq[i].real, sample.u_sq[i].imag]
            vals += [eps_u[i], eps_v[i]] if real else [np.nan, np.nan]
            fh.write(",".join(_fmt(v) for v in vals) + "\n")


def _write_energy_csv(path: Path, traj: Trajectory, times: np.ndarray, grid_n: int) -> None:
    st0 = traj.states[0]
    x = uniform_grid(st0.params, grid_n)
    with open(path, "w") as fh:
        fh.write("t,x,eps_u,eps_v,eps_total\n")
        for tt in times:
            st = traj.state_at(float(tt))
            eu, ev = energy_density(st, x)
            for i in range(grid_n):
                fh.write(
                    ",".join(_fmt(v) for v in (tt, x[i], eu[i], ev[i], eu[i] + ev[i])) + "\n"
                )


def _run_experiment(
    name: str,
    state0: SpinCMState,
    args,
    extra_config: dict,
    field_times: list[float] | None = None,
) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    timings: dict[str, float] = {}
    cfg = IntegratorConfig(rel_tol=args.tol, abs_tol=args.tol, real_mode=args.real_mode)
    t0 = _time.perf_counter()
    traj = integrate(state0, args.t_end, cfg, n_snapshots=args.snapshots)
    timings["integrate_s"] = _time.perf_counter() - t0

    outputs = ["manifest.json", "initial_state.json", "trajectory.csv", "trajectory.json",
               "conservation_report.json"]
    save_state(state0, out / "initial_state.json")
    trajectory_to_csv(traj, out / "trajectory.csv")
    trajectory_to_json(traj, out / "trajectory.json")

    t0 = _time.perf_counter()
    drift = conservation_drift(traj)
    timings["conservation_s"] = _time.perf_counter() - t0
    (out / "conservation_report.json").write_text(json.dumps(
        {"drift": drift, "tolerance_note": "max |Q(t) - Q(0)| over snapshots"}, indent=1, sort_keys=True))

    results: dict = {
        "termination": traj.termination,
        "event_time": traj.event_time,
        "t_final": float(traj.times[-1]),
        "drift": drift,
        "phi0": [[float(c.real), float(c.imag)] for c in state0.phi],
    }

    period = None
    if traj.termination == "time-limit":
        t0 = _time.perf_counter()
        period = _detect_pole_period(traj)
        timings["period_detect_s"] = _time.perf_counter() - t0
        results["pole_period"] = period
        if state0.is_real_reduction():
            t0 = _time.perf_counter()
            eperiod = _detect_energy_period(traj)
            timings["energy_period_s"] = _time.perf_counter() - t0
            results["energy_period"] = eperiod

    # field samples
    if field_times is None:
        T = period["period"] if period else (traj.times[-1] - traj.times[0])
        field_times = sorted({0.0, T / 4 - 0.5, T / 4, T / 4 + 0.5, 3 * T / 4 - 0.5, 3 * T / 4, 3 * T / 4 + 0.5, T})
        field_times = [tt for tt in field_times if 0 <= tt <= traj.times[-1]]
    for tt in field_times:
        tag = f"{tt:.4f}".replace("-", "m")
        fname = f"fields_t{tag}.csv"
        _write_fields_csv(out / fname, traj.state_at(float(tt)), args.grid_n)
        outputs.append(fname)
    results["field_times"] = list(map(float, field_times))

    # energy time series for the figures and the periodicity check; when a
    # pole period was detected the grid spans exactly one period, so rows at
    # t and t + T/2 exist pairwise
    if state0.is_real_reduction():
        t_hi = period["period"] if period else float(traj.times[-1])
        etimes = np.linspace(traj.times[0], traj.times[0] + t_hi, args.energy_samples)
        _write_energy_csv(out / "energy.csv", traj, etimes, 128)
        outputs.append("energy.csv")

    # residual certification at a few times
    t0 = _time.perf_counter()
    res_times = [0.0, float(traj.times[-1]) / 3, float(traj.times[-1])]
    residuals = []
    for tt in res_times:
        st = traj.state_at(float(tt))
        rep = pde_residual(st, n=args.grid_n, method=args.method)
        rep["excluded"] = rep.pop("resolution_flag")
        residuals.append(rep)
    timings["residual_s"] = _time.perf_counter() - t0
    (out / "residual_report.json").write_text(json.dumps(residuals, indent=1, sort_keys=True))
    outputs.append("residual_report.json")
    usable = [r["max_residual"] for r in residuals if not r["excluded"]]
    results["max_residual"] = max(usable) if usable else None

    manifest = {
        "command": name,
        "version": __version__,
        "config": {
            "t_end": args.t_end,
            "tol": args.tol,
            "grid_n": args.grid_n,
            "method": args.method,
            "real_mode": args.real_mode,
            "snapshots": args.snapshots,
            **extra_config,
        },
        "outputs": sorted(outputs),
        "timings": timings,
        "results": results,
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=1, sort_keys=True))
    missing = [f for f in outputs if not (out / f).exists()]
    if missing:
        log.error("manifest lists missing outputs: %s", missing)
        return 1
    if traj.termination == "step-failure":
        log.error("integration step failure: %s", traj.message)
        return 1
    if traj.termination == "admissibility-event":
        log.warning("admissibility event at t = %.6f", traj.event_time)
    print(json.dumps({"command": name, "out": str(out), "results": results}, indent=1, sort_keys=True))
    return 0


def cmd_breather(args) -> int:
    K = ellip_K(0.5)
    cfg = JacobiConfig(p=1, q=1, m=0.5, x0=K)
    state0 = jacobi_state(cfg)
    return _run_experiment("breather", state0, args, {"p": 1, "q": 1, "m": 0.5, "x0": K})


def _load_json_config(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def cmd_traveling_wave(args) -> int:
    if args.config:
        raw = _load_json_config(args.config)
        params = EllipticParams(ell=float(raw["ell"]), delta=float(raw["delta"]))
        cfg = TravelingWaveConfig(
            a0=tuple(complex(re, im) for re, im in raw["a0"]),
            b0=tuple(complex(re, im) for re, im in raw["b0"]),
            rho=complex(*raw.get("rho", [1.0, 0.0])),
            s1_0=complex(*raw.get("s1_0", [1.0, 0.0])),
            phi1_0=complex(*raw.get("phi1_0", [0.0, 0.0])),
            n1=tuple(raw.get("n1", (1.0, 0.0, 0.0))),
            n2=tuple(raw.get("n2", (0.0, 1.0, 0.0))),
        )
    else:
        params = EllipticParams(ell=args.ell, delta=args.delta)
        rho = complex(args.rho_re, args.rho_im)
        cfg = TravelingWaveConfig(
            a0=(0.37 + 1j * params.delta,), b0=(-0.91 - 1j * params.delta,), rho=rho, phi1_0=0.2 + 0.1j
        )
    state0 = traveling_wave_state(cfg, params)
    extra = {"rho": [state0.rho.real, state0.rho.imag], "n_poles": state0.n_upper,
             "ell": params.ell, "delta": params.delta}
    return _run_experiment("traveling-wave", state0, args, extra)


def cmd_jacobi(args) -> int:
    if args.config:
        raw = _load_json_config(args.config)
        p_, q_, m_ = int(raw["p"]), int(raw["q"]), float(raw["m"])
        x0 = float(raw["x0_in_K"]) * ellip_K(m_) if "x0_in_K" in raw else float(raw["x0"])
    else:
        p_, q_, m_ = args.p, args.q, args.m
        x0 = args.x0_in_K * ellip_K(m_) if args.x0 is None else args.x0
    cfg = JacobiConfig(p=p_, q=q_, m=m_, x0=x0)
    state0 = jacobi_state(cfg)
    return _run_experiment("jacobi", state0, args, {"p": p_, "q": q_, "m": m_, "x0": x0})


def cmd_residual(args) -> int:
    run_dir = Path(args.run_dir)
    traj_path = run_dir / "trajectory.json"
    if not traj_path.exists():
        log.error("no trajectory.json in %s", run_dir)
        return 2
    data = json.loads(traj_path.read_text())
    states = [state_from_dict(d) for d in data["states"]]
    times = np.array([st.time for st in states])
    wanted = [float(t) for t in args.times.split(",")] if args.times else [float(times[0]), float(times[-1])]
    reports = []
    worst = 0.0
    for tw in wanted:
        idx = int(np.argmin(np.abs(times - tw)))
        rep = pde_residual(states[idx], n=args.grid_n, method=args.method)
        rep["excluded"] = rep.pop("resolution_flag")
        reports.append(rep)
        if not rep["excluded"]:
            worst = max(worst, rep["max_residual"])
    payload = json.dumps(reports, indent=1, sort_keys=True)
    out = Path(args.out) if args.out else run_dir
    out.mkdir(parents=True, exist_ok=True)
    (out / "residual_report.json").write_text(payload)
    print(payload)
    return 0 if worst <= args.threshold else 1


# ---------------------------------------------------------------------------


def _add_common(sp: argparse.ArgumentParser, t_end_default: float) -> None:
    sp.add_argument("--t-end", type=float, default=t_end_default)
    sp.add_argument("--tol", type=float, default=1e-10, help="integrator rel/abs tolerance")
    sp.add_argument("--grid-n", type=int, default=512)
    sp.add_argument("--method", choices=("pv", "spectral"), default="pv")
    sp.add_argument("--out", required=True)
    sp.add_argument("--real-mode", action="store_true")
    sp.add_argument("--snapshots", type=int, default=129)
    sp.add_argument("--energy-samples", type=int, default=49)
    sp.add_argument("--config", default=None, help="JSON config file")


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("NCIHF_LOG", "WARNING").upper(), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    ap = argparse.ArgumentParser(prog="ncihf", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    sp = sub.add_parser("validate", help="run the identity/property battery")
    sp.add_argument("--ell", type=float, default=2 * ellip_K(0.5))
    sp.add_argument("--delta", type=float, default=2 * ellip_K(0.5))
    sp.add_argument("--grid-n", type=int, default=512)
    sp.add_argument("--perturb", type=float, default=0.0, help="fault injection amplitude")
    sp.add_argument("--out", default=None)
    sp.set_defaults(fn=cmd_validate)

    sp = sub.add_parser("breather", help="the reference oscillating solution")
    _add_common(sp, t_end_default=12.5)
    sp.set_defaults(fn=cmd_breather, real_mode=True)

    sp = sub.add_parser("traveling-wave", help="counter-propagating wave family")
    _add_common(sp, t_end_default=5.0)
    sp.add_argument("--ell", type=float, default=2 * ellip_K(0.5))
    sp.add_argument("--delta", type=float, default=2 * ellip_K(0.5))
    sp.add_argument("--rho-re", type=float, default=1.0)
    sp.add_argument("--rho-im", type=float, default=0.0)
    sp.set_defaults(fn=cmd_traveling_wave)

    sp = sub.add_parser("jacobi", help="sphere-parameterization initial data")
    _add_common(sp, t_end_default=12.5)
    sp.add_argument("--p", type=int, default=1)
    sp.add_argument("--q", type=int, default=1)
    sp.add_argument("--m", type=float, default=0.5)
    sp.add_argument("--x0", type=float, default=None)
    sp.add_argument("--x0-in-K", type=float, default=1.0)
    sp.set_defaults(fn=cmd_jacobi)

    sp = sub.add_parser("residual", help="re-certify an exported run")
    sp.add_argument("--run-dir", required=True)
    sp.add_argument("--times", default=None, help="comma-separated times")
    sp.add_argument("--grid-n", type=int, default=512)
    sp.add_argument("--method", choices=("pv", "spectral"), default="pv")
    sp.add_argument("--threshold", type=float, default=1e-6)
    sp.add_argument("--out", default=None)
    sp.set_defaults(fn=cmd_residual)

    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (ConfigError, ValueError) as exc:
        log.error("%s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
