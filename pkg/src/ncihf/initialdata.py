"""Admissible initial states: the counter-propagating-wave family and the
Jacobi sphere-parameterization family, plus null-spin building blocks."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .elliptic import EllipticParams, ellip_K, ellip_Kprime, jacobi_cn, jacobi_sn, zeta2
from .spincm import SpinCMState, backlund_velocity, constraint_residuals
from .vec3 import cross, hnorm

__all__ = [
    "ConfigError",
    "TravelingWaveConfig",
    "JacobiConfig",
    "null_spin",
    "traveling_wave_state",
    "jacobi_state",
]


class ConfigError(ValueError):
    """Invalid initial-data configuration."""


def null_spin(n1, n2, scale: complex) -> np.ndarray:
    """scale * (n1 + i n2) for an orthonormal real pair; satisfies s.s = 0."""
    n1 = np.asarray(n1, dtype=float)
    n2 = np.asarray(n2, dtype=float)
    if n1.shape != (3,) or n2.shape != (3,):
        raise ConfigError("n1, n2 must be real 3-vectors")
    if abs(n1 @ n1 - 1) > 1e-12 or abs(n2 @ n2 - 1) > 1e-12 or abs(n1 @ n2) > 1e-12:
        raise ConfigError("n1, n2 must be orthonormal unit vectors")
    return complex(scale) * (n1 + 1j * n2)


@dataclass(frozen=True)
class TravelingWaveConfig:
    """Equal null spins on both families; poles move rigidly with speed +-rho."""

    a0: tuple[complex, ...]
    b0: tuple[complex, ...]
    rho: complex = 1.0
    s1_0: complex = 1.0
    phi1_0: complex = 0.0
    n1: tuple[float, float, float] = (1.0, 0.0, 0.0)
    n2: tuple[float, float, float] = (0.0, 1.0, 0.0)

    def __post_init__(self) -> None:
        if len(self.a0) != len(self.b0) or not self.a0:
            raise ConfigError("need equally many (>=1) poles in both families")


def traveling_wave_state(cfg: TravelingWaveConfig, params: EllipticParams) -> SpinCMState:
    """State with s_j = t_j = s1_0 (n1 + i n2), phi = phi1_0 (n1 + i n2) + rho n1^n2,
    velocities +rho / -rho.  Passes all constraint residuals at ~1e-14."""
    n1 = np.asarray(cfg.n1, dtype=float)
    n2 = np.asarray(cfg.n2, dtype=float)
    s1 = null_spin(n1, n2, cfg.s1_0)
    phi0 = complex(cfg.phi1_0) * (n1 + 1j * n2) + complex(cfg.rho) * cross(n1, n2)
    N = len(cfg.a0)
    a = np.asarray(cfg.a0, dtype=complex)
    b = np.asarray(cfg.b0, dtype=complex)
    state = SpinCMState(
        a=a,
        adot=np.full(N, complex(cfg.rho)),
        s=np.tile(s1, (N, 1)),
        b=b,
        bdot=np.full(N, -complex(cfg.rho)),
        t=np.tile(s1, (N, 1)),
        phi=phi0,
        rho=complex(cfg.rho),
        params=params,
        time=0.0,
    )
    rep = constraint_residuals(state)
    if rep.max_residual > 1e-12:
        raise ConfigError(f"constructed state violates constraints ({rep.max_residual:.3e})")
    return state


@dataclass(frozen=True)
class JacobiConfig:
    """Sphere-valued initial datum r(x) built from sn(p x) and cn/sn(q(x - x0));
    pole counts N = M = 2 (p^2 + q^2)."""

    p: int
    q: int
    m: float
    x0: float
    K: float = field(init=False, compare=False)
    Kprime: float = field(init=False, compare=False)

    def __post_init__(self) -> None:
        if self.p < 1 or self.q < 1:
            raise ConfigError("p, q must be positive integers")
        if not 0 < self.m < 1:
            raise ConfigError("m must lie in (0,1)")
        object.__setattr__(self, "K", ellip_K(self.m))
        object.__setattr__(self, "Kprime", ellip_Kprime(self.m))
        if not 0 < self.x0 < 4 * self.K:
            raise ConfigError("x0 must lie in (0, 4K(m))")

    @property
    def n_poles(self) -> int:
        return 2 * (self.p**2 + self.q**2)

    def elliptic_params(self) -> EllipticParams:
        return EllipticParams(ell=2 * self.K, delta=2 * self.Kprime)

    def pole_sets(self) -> tuple[np.ndarray, np.ndarray]:
        """The two pole families of r(x) in the upper half of the cell."""
        K, Kp = self.K, self.Kprime
        al1 = np.array([
            (2 * j * K + (2 * k + 1) * 1j * Kp) / self.p
            for j in range(2 * self.p) for k in range(self.p)
        ])
        al2 = np.array([
            (2 * j * K + (2 * k + 1) * 1j * Kp) / self.q + self.x0
            for j in range(2 * self.q) for k in range(self.q)
        ])
        return al1, al2


def sphere_map(cfg: JacobiConfig, x) -> np.ndarray:
    """The sphere-valued profile
    r(x) = (sn(px) cn(q(x-x0)), sn(px) sn(q(x-x0)), cn(px)),  |r| = 1."""
    x = np.asarray(x, dtype=float)
    snp = jacobi_sn(x * cfg.p + 0j, cfg.m)
    cnp = jacobi_cn(x * cfg.p + 0j, cfg.m)
    snq = jacobi_sn((x - cfg.x0) * cfg.q + 0j, cfg.m)
    cnq = jacobi_cn((x - cfg.x0) * cfg.q + 0j, cfg.m)
    return np.stack([snp.real * cnq.real, snp.real * snq.real, cnp.real], axis=-1)


def jacobi_state(cfg: JacobiConfig, residual_tol: float = 1e-9) -> SpinCMState:
    """Real-reduction state whose reconstructed field at t=0 equals sphere_map.

    Spins are the pole residues of the profile (times -i); the background is
    the residue-weighted zeta2 sum.  The background is cross-checked by
    solving the orthogonality constraints for phi; a discrepancy beyond
    residual_tol fails construction."""
    al1, al2 = cfg.pole_sets()
    diffs = np.abs(al1[:, None] - al2[None, :])
    if diffs.size and np.min(diffs) < 1e-12 * cfg.K:
        raise ConfigError("pole sets of the two Jacobi factors are not disjoint")
    params = cfg.elliptic_params()
    sm = np.sqrt(cfg.m)
    K, Kp = cfg.K, cfg.Kprime

    alphas = []
    spins = []
    for j in range(2 * cfg.p):
        for k in range(cfg.p):
            al = (2 * j * K + (2 * k + 1) * 1j * Kp) / cfg.p
            vec = np.array([
                jacobi_cn(cfg.q * (al - cfg.x0), cfg.m),
                jacobi_sn(cfg.q * (al - cfg.x0), cfg.m),
                -1j * (-1.0) ** k,
            ])
            spins.append((-1j * (-1.0) ** j / (cfg.p * sm)) * vec)
            alphas.append(al)
    for j in range(2 * cfg.q):
        for k in range(cfg.q):
            al = (2 * j * K + (2 * k + 1) * 1j * Kp) / cfg.q + cfg.x0
            snv = jacobi_sn(cfg.p * al, cfg.m)
            vec = np.array([-1j * (-1.0) ** k * snv, snv, 0.0])
            spins.append((-1j * (-1.0) ** j / (cfg.q * sm)) * vec)
            alphas.append(al)
    alphas = np.asarray(alphas)
    s = np.asarray(spins)
    if np.min(np.sqrt(np.real(np.einsum("jc,jc->j", s, np.conj(s))))) < 1e-8:
        raise ConfigError(
            "a profile residue vanishes (degenerate p, q, x0 combination); "
            "the nonvanishing-spin hypothesis fails"
        )
    a = alphas + 0.5j * params.delta

    # background from the residue expansion: r(0) + sum_j i s_j zeta2(alpha_j) + c.c.
    w = np.sum(1j * s * zeta2(alphas, params)[:, None], axis=0)
    phi0 = np.array([0.0, 0.0, 1.0], dtype=complex) + w + np.conj(w)

    state = SpinCMState(
        a=a,
        adot=np.zeros(len(a), dtype=complex),
        s=s,
        b=np.conj(a),
        bdot=np.zeros(len(a), dtype=complex),
        t=np.conj(s),
        phi=phi0,
        rho=1.0,
        params=params,
        time=0.0,
    )

    # independent cross-check: solve the orthogonality constraints for phi
    phi_solved = _solve_background(state)
    if hnorm(phi_solved - phi0) > residual_tol * max(1.0, hnorm(phi0)):
        raise ConfigError(
            f"background closed form and constraint solve disagree by {hnorm(phi_solved - phi0):.3e}"
        )

    adot, bdot = backlund_velocity(state)
    state.adot, state.bdot = adot, bdot

    rep = constraint_residuals(state)
    if rep.max_residual > residual_tol:
        raise ConfigError(f"constructed state violates constraints ({rep.max_residual:.3e})")
    return state


def _solve_background(state: SpinCMState) -> np.ndarray:
    """Least-squares solve of the orthogonality constraints for phi."""
    p = state.params
    a, b, s, t = state.a, state.b, state.s, state.t
    rows = []
    rhs = []
    for j in range(len(a)):
        acc = np.zeros(3, dtype=complex)
        for k in range(len(a)):
            if k != j:
                acc += s[k] * zeta2(a[j] - a[k], p)
        for k in range(len(b)):
            acc -= t[k] * zeta2(a[j] - b[k] + 1j * p.delta, p)
        rows.append(1j * s[j])
        rhs.append(s[j] @ acc)
    for j in range(len(b)):
        acc = np.zeros(3, dtype=complex)
        for k in range(len(b)):
            if k != j:
                acc += t[k] * zeta2(b[j] - b[k], p)
        for k in range(len(a)):
            acc -= s[k] * zeta2(b[j] - a[k] + 1j * p.delta, p)
        rows.append(-1j * t[j])
        rhs.append(t[j] @ acc)
    A = np.asarray(rows)
    r = np.asarray(rhs)
    sol, *_ = np.linalg.lstsq(A, r, rcond=None)
    return sol
