"""Complex 3-vector algebra: bilinear dot (no conjugation), cross products,
and complex-orthogonal rotations generated by a spin vector."""
from __future__ import annotations

import numpy as np

__all__ = ["cdot", "hdot", "cross", "hnorm", "skew", "spin_rotation"]


def cdot(x, y):
    """Bilinear dot product sum_a x^a y^a (no conjugation)."""
    return np.sum(np.asarray(x) * np.asarray(y), axis=-1)


def hdot(x, y):
    """Hermitian pairing sum_a x^a conj(y^a)."""
    return np.sum(np.asarray(x) * np.conj(np.asarray(y)), axis=-1)


def cross(x, y):
    """Cross product, componentwise bilinear (works on complex vectors)."""
    return np.cross(np.asarray(x), np.asarray(y))


def hnorm(x):
    """Hermitian norm sqrt(x . x*)."""
    return np.sqrt(np.real(hdot(x, x)))


def skew(s) -> np.ndarray:
    """Antisymmetric matrix S with S @ x = s ^ x."""
    s = np.asarray(s)
    return np.array(
        [
            [0.0, -s[2], s[1]],
            [s[2], 0.0, -s[0]],
            [-s[1], s[0], 0.0],
        ],
        dtype=complex,
    )


def spin_rotation(total_spin, angle) -> np.ndarray:
    """exp(angle * skew(total_spin)) in SO(3; C) via the Rodrigues form.

    Works for null total spin (S.S = 0): sin(x)/x and (1-cos x)/x**2 switch to
    their Taylor series below |x| = 1e-4, where the generator is nilpotent.
    Either branch of sqrt(S.S) gives the same matrix.
    """
    S = skew(total_spin)
    w = np.sqrt(complex(cdot(total_spin, total_spin)))
    x = angle * w
    if abs(x) < 1e-4:
        # sin(x)/x = 1 - x^2/6 + x^4/120; (1-cos x)/x^2 = 1/2 - x^2/24 + x^4/720
        c1 = angle * (1.0 - x**2 / 6.0 + x**4 / 120.0)
        c2 = angle**2 * (0.5 - x**2 / 24.0 + x**4 / 720.0)
    else:
        c1 = np.sin(x) / w
        c2 = (1.0 - np.cos(x)) / w**2
    return np.eye(3, dtype=complex) + c1 * S + c2 * (S @ S)
