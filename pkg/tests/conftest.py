import numpy as np
import pytest

from ncihf import EllipticParams, JacobiConfig, ellip_K, jacobi_state


@pytest.fixture(scope="session")
def square_params() -> EllipticParams:
    """ell = delta = 2K(1/2), the breather lattice."""
    K = ellip_K(0.5)
    return EllipticParams(ell=2 * K, delta=2 * K)


@pytest.fixture(scope="session")
def wide_params() -> EllipticParams:
    return EllipticParams(ell=3.0, delta=1.25)


@pytest.fixture(scope="session")
def breather_state():
    K = ellip_K(0.5)
    return jacobi_state(JacobiConfig(p=1, q=1, m=0.5, x0=K))


def random_cell_points(params: EllipticParams, n: int, seed: int, margin: float = 0.15):
    """Random points in the fundamental cell, bounded away from the lattice."""
    rng = np.random.default_rng(seed)
    pts = []
    while len(pts) < n:
        z = complex(
            rng.uniform(-params.ell, params.ell),
            rng.uniform(-params.delta, params.delta),
        )
        z0, _, _ = params._reduce(np.asarray(z))
        if abs(complex(z0)) > margin:
            pts.append(z)
    return np.asarray(pts)
