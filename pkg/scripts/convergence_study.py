#!/usr/bin/env python3
"""Convergence experiments: conserved-quantity drift versus integrator
tolerance, and PDE-residual decay versus grid resolution."""
import json
import sys

from ncihf import (
    IntegratorConfig,
    JacobiConfig,
    conservation_drift,
    ellip_K,
    integrate,
    jacobi_state,
    pde_residual,
)


def main() -> int:
    state = jacobi_state(JacobiConfig(p=1, q=1, m=0.5, x0=ellip_K(0.5)))
    report = {"drift_vs_tolerance": [], "residual_vs_grid": []}
    for tol in (1e-6, 1e-8, 1e-10, 1e-12):
        traj = integrate(state, 2.0, IntegratorConfig(rel_tol=tol, abs_tol=tol), n_snapshots=9)
        drift = max(conservation_drift(traj).values())
        report["drift_vs_tolerance"].append({"tol": tol, "max_drift": drift})
        print(f"tol {tol:.0e}: max drift {drift:.3e}")
    for n in (64, 128, 256, 512):
        r = pde_residual(state, n=n)["max_residual"]
        report["residual_vs_grid"].append({"grid_n": n, "max_residual": r})
        print(f"grid {n:4d}: residual {r:.3e}")
    out = sys.argv[1] if len(sys.argv) > 1 else "runs/convergence.json"
    import pathlib

    pathlib.Path(out).parent.mkdir(parents=True, exist_ok=True)
    pathlib.Path(out).write_text(json.dumps(report, indent=1))
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
