"""Closed-form entanglement measures for small qubit systems.

The 3-tangle of a pure three-qubit state is computed from the degree-4
polynomial invariant of its eight amplitudes; two-qubit mixed-state
concurrence and concurrence of assistance use the spin-flip spectrum of
rho * rho~ with rho~ = (sy x sy) rho* (sy x sy). Conjugation is always in
the computational basis.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qstate import DensityMatrix, StateVector

SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])


@dataclass(frozen=True)
class MeasureValue:
    value: float
    kind: str

    def to_dict(self) -> dict:
        return {"value": self.value, "kind": self.kind}


def _require_dims(state, dims, what: str):
    if tuple(state.dims) != dims:
        raise ValueError(f"{what} requires dims {dims}, got {state.dims}")


def mu3_amplitudes(amps: np.ndarray) -> np.ndarray:
    """Three-qubit tangle polynomial on raw amplitude rows (last axis = 8).

    Homogeneous of degree 4, so on an unnormalized vector c*psi it returns
    |c|^4 * mu3(psi). Works on any batch shape (..., 8).
    """
    a = np.asarray(amps)
    a000, a001, a010, a011 = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    a100, a101, a110, a111 = a[..., 4], a[..., 5], a[..., 6], a[..., 7]
    d1 = (a000 ** 2 * a111 ** 2 + a001 ** 2 * a110 ** 2
          + a010 ** 2 * a101 ** 2 + a100 ** 2 * a011 ** 2)
    d2 = (a000 * a111 * a011 * a100 + a000 * a111 * a101 * a010
          + a000 * a111 * a110 * a001 + a011 * a100 * a101 * a010
          + a011 * a100 * a110 * a001 + a101 * a010 * a110 * a001)
    d3 = a000 * a110 * a101 * a011 + a111 * a001 * a010 * a100
    return 4.0 * np.abs(d1 - 2.0 * d2 + 4.0 * d3)


def tau3_amplitudes(amps: np.ndarray) -> np.ndarray:
    """sqrt of mu3 on raw rows; degree 2, so it scales with the squared norm."""
    return np.sqrt(mu3_amplitudes(amps))


def concurrence_amplitudes(amps: np.ndarray) -> np.ndarray:
    """Pure two-qubit concurrence 2|a00*a11 - a01*a10| on raw rows (..., 4)."""
    a = np.asarray(amps)
    return 2.0 * np.abs(a[..., 0] * a[..., 3] - a[..., 1] * a[..., 2])


def mu3_pure(state: StateVector) -> MeasureValue:
    """Three-qubit tangle of a normalized pure state."""
    _require_dims(state, (2, 2, 2), "mu3_pure")
    return MeasureValue(float(mu3_amplitudes(state.amps)), "mu3")


def tau3_pure(state: StateVector) -> MeasureValue:
    _require_dims(state, (2, 2, 2), "tau3_pure")
    return MeasureValue(float(np.sqrt(mu3_amplitudes(state.amps))), "tau3")


def _spin_flip_spectrum(dm: DensityMatrix) -> np.ndarray:
    """Decreasing square roots of the eigenvalues of rho * rho~.

    With rho = B B^H (columns of B are sqrt-eigenvalue-scaled eigenvectors),
    the nonzero eigenvalues of rho*rho~ are those of T T* for the complex
    symmetric T = B^T (sy x sy) B, i.e. the squared singular values of T.
    Computing singular values of the small T is numerically stable where a
    general eigensolve of the non-normal product loses half the digits.
    """
    flip = np.kron(SIGMA_Y, SIGMA_Y).real
    w, v = np.linalg.eigh((dm.mat + dm.mat.conj().T) / 2)
    keep = w > 1e-15
    b = v[:, keep] * np.sqrt(w[keep])
    t = b.T @ flip @ b
    lam = np.zeros(4)
    sv = np.linalg.svd(t, compute_uv=False)
    lam[: sv.size] = sv
    return np.sort(lam)[::-1]


def concurrence_mixed_2q(dm: DensityMatrix) -> MeasureValue:
    """Wootters concurrence max(0, l1 - l2 - l3 - l4) of a two-qubit state."""
    _require_dims(dm, (2, 2), "concurrence_mixed_2q")
    lam = _spin_flip_spectrum(dm)
    return MeasureValue(max(0.0, float(lam[0] - lam[1] - lam[2] - lam[3])), "concurrence")


def concurrence_assist_2q(dm: DensityMatrix) -> MeasureValue:
    """Concurrence of assistance: the sum of all four spin-flip values.

    Always at least the concurrence of the same state.
    """
    _require_dims(dm, (2, 2), "concurrence_assist_2q")
    lam = _spin_flip_spectrum(dm)
    return MeasureValue(float(lam.sum()), "concurrence_assist")


def n_tangle_4q(state: StateVector) -> MeasureValue:
    """Four-qubit n-tangle |<psi| sy x sy x sy x sy |psi*>|^2.

    Equals one for a product of two Bell pairs, which is why it cannot
    serve as a genuinely quadripartite measure.
    """
    _require_dims(state, (2, 2, 2, 2), "n_tangle_4q")
    flip = SIGMA_Y
    for _ in range(3):
        flip = np.kron(flip, SIGMA_Y)
    overlap = state.amps.conj() @ flip @ state.amps.conj()
    return MeasureValue(float(abs(overlap) ** 2), "n_tangle")


def det_product(ops) -> float:
    """|det A| * |det B| * ... over a list of local operators or matrices."""
    total = 1.0
    for op in ops:
        mat = op.matrix if hasattr(op, "matrix") else np.asarray(op)
        total *= abs(np.linalg.det(mat))
    return float(total)
