"""Shared state constructors and independent oracles for the test suite."""

import numpy as np

from tangle4 import StateVector

INV_SQRT2 = 2 ** -0.5


def basis_state(dims, index) -> StateVector:
    amps = np.zeros(int(np.prod(dims)), complex)
    amps[index] = 1.0
    return StateVector(tuple(dims), amps)


def ghz(n: int) -> StateVector:
    amps = np.zeros(2 ** n, complex)
    amps[0] = amps[-1] = INV_SQRT2
    return StateVector((2,) * n, amps)


def w_state(n: int) -> StateVector:
    amps = np.zeros(2 ** n, complex)
    for k in range(n):
        amps[1 << k] = n ** -0.5
    return StateVector((2,) * n, amps)


def bell_pair() -> StateVector:
    return StateVector((2, 2), np.array([INV_SQRT2, 0, 0, INV_SQRT2]))


def bell_bell() -> StateVector:
    amps = np.kron(bell_pair().amps, bell_pair().amps)
    return StateVector((2, 2, 2, 2), amps)


def haar_unitaries_batch(count, dim, rng):
    z = rng.normal(size=(count, dim, dim)) + 1j * rng.normal(size=(count, dim, dim))
    q, r = np.linalg.qr(z)
    diag = np.einsum("kii->ki", r)
    return q * (diag / np.abs(diag))[:, None, :]


def sampled_concurrence_extrema(dm_mat: np.ndarray, samples: int, length: int, rng):
    """Brute-force decomposition sampler for two-qubit average concurrence.

    Draws Haar unitaries mixing the scaled eigenvectors and evaluates the
    length-``length`` decomposition average directly; the pure two-qubit
    concurrence 2|a00*a11 - a01*a10| is degree two, so subnormalized rows
    already carry their weights. Independent of the closed-form route.
    """
    w, v = np.linalg.eigh(dm_mat)
    keep = w > 1e-12
    scaled = (v[:, keep] * np.sqrt(w[keep])).T  # r x 4
    r = scaled.shape[0]
    if length < r:
        raise ValueError("decomposition length below rank")
    best_min, best_max = np.inf, -np.inf
    left = samples
    while left > 0:
        chunk = min(left, 20000)
        units = haar_unitaries_batch(chunk, length, rng)
        rows = units[:, :, :r] @ scaled
        conc = 2 * np.abs(rows[..., 0] * rows[..., 3] - rows[..., 1] * rows[..., 2])
        avg = conc.sum(axis=1)
        best_min = min(best_min, float(avg.min()))
        best_max = max(best_max, float(avg.max()))
        left -= chunk
    return best_min, best_max


def random_det1_operator(rng, scale: float = 0.4) -> np.ndarray:
    """Determinant-one 2x2 operator exp(T) with T random traceless."""
    t = scale * (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
    t -= np.trace(t) / 2 * np.eye(2)
    from scipy.linalg import expm

    return expm(t)
