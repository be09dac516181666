import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def shift(n: int) -> np.ndarray:
    return np.diag(np.ones(n - 1), -1).astype(np.complex128)


def nilpotent_block(rng, m: int) -> list[np.ndarray]:
    """Four polynomials in the m x m shift with zero constant term.

    The first has a nonzero linear coefficient, so no nonzero subspace
    reduces the block to a normal tuple.
    """
    s = shift(m)
    out = []
    for i in range(4):
        c = 0.3 * (rng.standard_normal(m) + 1j * rng.standard_normal(m)) / np.sqrt(m)
        if i == 0:
            c[0] = 0.4
        p = np.zeros((m, m), dtype=np.complex128)
        power = np.eye(m, dtype=np.complex128)
        for j in range(m - 1):
            power = power @ s
            p += c[j] * power
        out.append(p)
    return out


def planted_decomposition(rng, nu: int, ni: int, nn: int):
    """(bH block) + (interior block) + (nilpotent block), conjugated by a Haar unitary.

    Returns the quadruple's entries and an orthonormal basis of the planted
    unitary subspace.
    """
    from hexablock.oracles import haar_unitary, sample_region

    pts_u = sample_region("bH", rng, nu)
    pts_i = sample_region("H", rng, ni)
    nil = nilpotent_block(rng, nn) if nn else [np.zeros((0, 0))] * 4
    n = nu + ni + nn
    w = haar_unitary(rng, n)
    ents = []
    for k in range(4):
        d = np.zeros((n, n), dtype=np.complex128)
        d[:nu, :nu] = np.diag(pts_u[:, k]) if nu else 0
        d[nu:nu + ni, nu:nu + ni] = np.diag(pts_i[:, k]) if ni else 0
        d[nu + ni:, nu + ni:] = nil[k]
        ents.append(w @ d @ w.conj().T)
    return ents, w[:, :nu]
