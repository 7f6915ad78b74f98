"""Weierstrass-type and Jacobi elliptic functions on the rectangular lattice.

All Weierstrass-type functions live on the lattice Lambda = {2n*ell + 2m*i*delta}
with half-periods ell (real) and i*delta (imaginary).  Evaluation goes through
Jacobi theta-function q-series after reducing the argument to the fundamental
cell.  The lattice orientation (which half-period plays the role of the "real"
one in the theta representation) is chosen so that q <= exp(-pi), which keeps
the series short and cancellation-free for any aspect ratio ell/delta; series
terms are assembled from combined exponentials so nothing overflows even when
the aspect ratio is large.

Shifted variants used throughout:

    zeta1(z) = zeta(z) - (zeta(ell)/ell) z             2*ell-periodic
    zeta2(z) = zeta(z) - (zeta(i delta)/(i delta)) z   2*i*delta-periodic
    wp2(z)   = wp(z) + zeta(i delta)/(i delta)         = -zeta2'(z)
    wp1(z)   = wp(z) + zeta(ell)/ell                   zero mean on a real period
    f2(z)    = zeta2(z)**2 - wp2(z)

wp1 - wp2 = pi/(2*ell*delta) =: field_shift, the constant that makes the
pole-interaction potential zero-mean; it reappears as the background-frame
shift under which the reconstructed fields solve the PDE.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import ellipj

__all__ = [
    "EllipticParams",
    "JacobiParams",
    "EllipticError",
    "PoleProximityError",
    "weier_zeta",
    "zeta1",
    "zeta2",
    "wp1",
    "wp2",
    "wp2_prime",
    "f2",
    "f2_prime",
    "ellip_K",
    "ellip_Kprime",
    "jacobi_sn",
    "jacobi_cn",
    "jacobi_dn",
]


class EllipticError(ValueError):
    """Invalid parameters or arguments for elliptic-function evaluation."""


class PoleProximityError(EllipticError):
    """Argument closer to a pole than the configured guard radius."""


_MAX_ASPECT = 400.0  # keeps the dominant theta term below float64 overflow


@dataclass(frozen=True)
class EllipticParams:
    """Half-periods (ell, i*delta) plus cached lattice constants.

    Construction computes zeta(ell) and zeta(i*delta) by two independent
    series routes and fails loudly if they violate the Legendre relation
    zeta(ell)*(i delta) - zeta(i delta)*ell = i pi/2 beyond 1e-10.
    """

    ell: float
    delta: float
    pole_guard: float = 1e-8

    # derived constants, excluded from identity/comparison
    eta_ell: complex = field(init=False, repr=False, compare=False)
    eta_idelta: complex = field(init=False, repr=False, compare=False)
    field_shift: float = field(init=False, repr=False, compare=False)
    _omega1: complex = field(init=False, repr=False, compare=False)
    _rate: float = field(init=False, repr=False, compare=False)
    _nmax: int = field(init=False, repr=False, compare=False)
    _eta1o: complex = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not (self.ell > 0 and self.delta > 0):
            raise EllipticError(f"half-periods must be positive, got ell={self.ell}, delta={self.delta}")
        if self.pole_guard <= 0:
            raise EllipticError("pole_guard must be positive")
        aspect = max(self.ell / self.delta, self.delta / self.ell)
        if aspect > _MAX_ASPECT:
            raise EllipticError(f"aspect ratio {aspect:.3g} too extreme for float64 theta series")

        # Orientation: omega1 is whichever half-period gives q = exp(-pi*aspect) <= exp(-pi).
        if self.delta >= self.ell:
            omega1 = complex(self.ell)
        else:
            omega1 = 1j * self.delta
        rate = np.pi * aspect  # -log q of the oriented lattice
        nmax = int(np.ceil(np.sqrt(42.0 / rate + 0.25))) + 2
        object.__setattr__(self, "_omega1", omega1)
        object.__setattr__(self, "_rate", float(rate))
        object.__setattr__(self, "_nmax", max(nmax, 4))

        # eta of the oriented lattice from theta1'''(0)/theta1'(0)
        n = np.arange(self._nmax)
        sgn = (-1.0) ** n
        qq = np.exp(-rate * (n + 0.5) ** 2)
        odd = 2 * n + 1
        th1p0 = np.sum(2 * sgn * qq * odd)
        th1ppp0 = -np.sum(2 * sgn * qq * odd**3)
        eta1o = -(np.pi**2 / (12 * omega1)) * th1ppp0 / th1p0
        object.__setattr__(self, "_eta1o", eta1o)

        # the other half-period's eta directly from the zeta series
        if self.delta >= self.ell:
            object.__setattr__(self, "eta_ell", complex(eta1o))
            object.__setattr__(self, "eta_idelta", complex(self._zeta_cell(np.asarray(1j * self.delta))))
        else:
            object.__setattr__(self, "eta_idelta", complex(eta1o))
            object.__setattr__(self, "eta_ell", complex(self._zeta_cell(np.asarray(complex(self.ell)))))

        legendre = self.eta_ell * 1j * self.delta - self.eta_idelta * self.ell - 1j * np.pi / 2
        if abs(legendre) > 1e-10:
            raise EllipticError(f"Legendre relation violated by {abs(legendre):.3e}; theta evaluation inconsistent")
        object.__setattr__(self, "field_shift", float(np.pi / (2 * self.ell * self.delta)))

    # -- internal evaluation ------------------------------------------------

    def _theta_ratios(self, v: np.ndarray):
        """theta1'/theta1 and the 2nd/3rd-derivative ratios at v.

        Each term q**((n+1/2)**2) * exp(+-i(2n+1)v) is formed with a single
        combined exponent, so the n=0 term dominates gracefully instead of
        producing inf*0 for strongly anisotropic lattices.
        """
        n = np.arange(self._nmax)
        sgn = (-1.0) ** n
        odd = (2 * n + 1).astype(float)
        base = -self._rate * (n + 0.5) ** 2
        phase = 1j * odd * v[..., None]
        ep = np.exp(base + phase)
        em = np.exp(base - phase)
        t0 = np.sum(sgn * (ep - em), axis=-1) / 1j          # theta1 (up to factor 2, cancels)
        t1 = np.sum(sgn * odd * (ep + em), axis=-1)
        t2 = -np.sum(sgn * odd**2 * (ep - em), axis=-1) / 1j
        t3 = -np.sum(sgn * odd**3 * (ep + em), axis=-1)
        return t1 / t0, t2 / t0, t3 / t0

    def _reduce(self, z: np.ndarray):
        """z = z0 + 2*nre*ell + 2*nim*i*delta with z0 in the centered cell."""
        nre = np.round(z.real / (2 * self.ell))
        nim = np.round(z.imag / (2 * self.delta))
        z0 = z - 2 * self.ell * nre - 2j * self.delta * nim
        return z0, nre, nim

    def _guard(self, z0: np.ndarray) -> None:
        if z0.size == 0:
            return
        dmin = np.min(np.abs(z0))
        if dmin < self.pole_guard:
            raise PoleProximityError(f"argument within {dmin:.3e} of a lattice point (guard {self.pole_guard:.1e})")

    def _zeta_cell(self, z0: np.ndarray) -> np.ndarray:
        v = np.pi * z0 / (2 * self._omega1)
        L1, _, _ = self._theta_ratios(v)
        return self._eta1o * z0 / self._omega1 + (np.pi / (2 * self._omega1)) * L1

    def _wp_cell(self, z0: np.ndarray) -> np.ndarray:
        v = np.pi * z0 / (2 * self._omega1)
        L1, L2, _ = self._theta_ratios(v)
        return -self._eta1o / self._omega1 - (np.pi / (2 * self._omega1)) ** 2 * (L2 - L1**2)

    def _wp_prime_cell(self, z0: np.ndarray) -> np.ndarray:
        v = np.pi * z0 / (2 * self._omega1)
        L1, L2, L3 = self._theta_ratios(v)
        return -((np.pi / (2 * self._omega1)) ** 3) * (L3 - 3 * L1 * L2 + 2 * L1**3)


def _asarray(z):
    arr = np.asarray(z, dtype=complex)
    return arr, arr.ndim == 0


def _ret(val: np.ndarray, scalar: bool):
    return val.item() if scalar else val


def weier_zeta(z, p: EllipticParams):
    """Weierstrass zeta(z) on the lattice of p."""
    arr, scalar = _asarray(z)
    z0, nre, nim = p._reduce(arr)
    p._guard(z0)
    val = p._zeta_cell(z0) + 2 * nre * p.eta_ell + 2 * nim * p.eta_idelta
    return _ret(val, scalar)


def zeta1(z, p: EllipticParams):
    """zeta(z) - (zeta(ell)/ell) z; 2*ell-periodic, odd."""
    arr, scalar = _asarray(z)
    z0, _, nim = p._reduce(arr)
    p._guard(z0)
    # exactly periodic in the 2*ell direction; 2*i*delta steps add -i*pi/ell
    val = p._zeta_cell(z0) - (p.eta_ell / p.ell) * z0 + nim * (-1j * np.pi / p.ell)
    return _ret(val, scalar)


def zeta2(z, p: EllipticParams):
    """zeta(z) - (zeta(i delta)/(i delta)) z; 2*i*delta-periodic, odd."""
    arr, scalar = _asarray(z)
    z0, nre, _ = p._reduce(arr)
    p._guard(z0)
    # exactly periodic in the 2*i*delta direction; 2*ell steps add pi/delta
    val = p._zeta_cell(z0) - (p.eta_idelta / (1j * p.delta)) * z0 + nre * (np.pi / p.delta)
    return _ret(val, scalar)


def wp2(z, p: EllipticParams):
    """wp(z) + zeta(i delta)/(i delta); doubly periodic, even; equals -zeta2'."""
    arr, scalar = _asarray(z)
    z0, _, _ = p._reduce(arr)
    p._guard(z0)
    return _ret(p._wp_cell(z0) + p.eta_idelta / (1j * p.delta), scalar)


def wp1(z, p: EllipticParams):
    """wp(z) + zeta(ell)/ell; the zero-real-period-mean variant
    (wp1 = wp2 + p.field_shift)."""
    arr, scalar = _asarray(z)
    z0, _, _ = p._reduce(arr)
    p._guard(z0)
    return _ret(p._wp_cell(z0) + p.eta_ell / p.ell, scalar)


def wp2_prime(z, p: EllipticParams):
    """wp'(z) (additive constants drop out of the derivative)."""
    arr, scalar = _asarray(z)
    z0, _, _ = p._reduce(arr)
    p._guard(z0)
    return _ret(p._wp_prime_cell(z0), scalar)


def f2(z, p: EllipticParams):
    """zeta2(z)**2 - wp2(z); even."""
    return zeta2(z, p) ** 2 - wp2(z, p)


def f2_prime(z, p: EllipticParams):
    """f2'(z) = -2 zeta2(z) wp2(z) - wp2'(z); odd."""
    return -2 * zeta2(z, p) * wp2(z, p) - wp2_prime(z, p)


# -- Jacobi functions and complete elliptic integrals -----------------------


def ellip_K(m: float) -> float:
    """Complete elliptic integral of the first kind K(m), parameter convention,
    via the arithmetic-geometric mean."""
    if not 0 < m < 1:
        raise EllipticError(f"elliptic parameter must lie in (0,1), got {m}")
    a, b = 1.0, float(np.sqrt(1.0 - m))
    for _ in range(64):  # quadratic convergence; guard against ulp stagnation
        if abs(a - b) <= 4e-16 * a:
            break
        a, b = 0.5 * (a + b), float(np.sqrt(a * b))
    return float(np.pi / (2 * a))


def ellip_Kprime(m: float) -> float:
    """K'(m) = K(1-m)."""
    return ellip_K(1.0 - m)


@dataclass(frozen=True)
class JacobiParams:
    """Elliptic parameter m with the associated quarter periods."""

    m: float
    K: float = field(init=False, compare=False)
    Kprime: float = field(init=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "K", ellip_K(self.m))
        object.__setattr__(self, "Kprime", ellip_Kprime(self.m))


def _jacobi_guard(z: np.ndarray, m: float, guard: float) -> None:
    K, Kp = ellip_K(m), ellip_Kprime(m)
    rx = z.real - 2 * K * np.round(z.real / (2 * K))
    ry = z.imag - 2 * Kp * np.round(z.imag / (2 * Kp))
    # simple poles sit at (0, +-Kp) in the reduced rectangle
    d = np.minimum(np.hypot(rx, ry - Kp), np.hypot(rx, ry + Kp))
    if z.size and np.min(d) < guard:
        raise PoleProximityError(f"argument within {np.min(d):.3e} of a Jacobi pole (guard {guard:.1e})")


def _jacobi_complex(z, m: float, guard: float):
    """sn, cn, dn at complex z via the real/imaginary addition split."""
    if not 0 < m < 1:
        raise EllipticError(f"elliptic parameter must lie in (0,1), got {m}")
    arr, scalar = _asarray(z)
    _jacobi_guard(arr, m, guard)
    x, y = arr.real, arr.imag
    s, c, d, _ = ellipj(x, m)
    s1, c1, d1, _ = ellipj(y, 1.0 - m)
    den = c1**2 + m * (s * s1) ** 2
    sn = (s * d1 + 1j * c * d * s1 * c1) / den
    cn = (c * c1 - 1j * s * d * s1 * d1) / den
    dn = (d * c1 * d1 - 1j * m * s * c * s1) / den
    return _ret(sn, scalar), _ret(cn, scalar), _ret(dn, scalar)


def jacobi_sn(z, m: float, guard: float = 1e-8):
    """Jacobi sn(z|m); complex arguments allowed."""
    return _jacobi_complex(z, m, guard)[0]


def jacobi_cn(z, m: float, guard: float = 1e-8):
    """Jacobi cn(z|m); complex arguments allowed."""
    return _jacobi_complex(z, m, guard)[1]


def jacobi_dn(z, m: float, guard: float = 1e-8):
    """Jacobi dn(z|m); complex arguments allowed."""
    return _jacobi_complex(z, m, guard)[2]
