"""State and operator algebra for small multipartite systems.

Pure states are complex amplitude vectors over an ordered list of subsystem
dimensions, indexed big-endian (first subsystem most significant). Density
matrices, ensembles and local operators follow the same convention. All
operations are pure functions; randomness is explicit through seeds.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

ATOL_NORM = 1e-10
ATOL_HERMITIAN = 1e-10
ATOL_TRACE = 1e-10
ATOL_EIG = 1e-10
ATOL_KRAUS = 1e-9
ATOL_WEIGHTS = 1e-9
ATOL_RECONSTRUCT = 1e-8
EIG_CUTOFF = 1e-12


class ZeroStateError(ValueError):
    """Raised when an operation receives a (numerically) zero state vector."""


def _as_dims(dims) -> tuple[int, ...]:
    out = tuple(int(d) for d in dims)
    if not out or any(d < 1 for d in out):
        raise ValueError(f"invalid subsystem dimensions {dims!r}")
    return out


@dataclass(frozen=True)
class StateVector:
    """Pure state: amplitudes over ordered subsystem dims, big-endian index."""

    dims: tuple[int, ...]
    amps: np.ndarray

    def __post_init__(self):
        dims = _as_dims(self.dims)
        amps = np.asarray(self.amps, dtype=complex).reshape(-1)
        if amps.size != math.prod(dims):
            raise ValueError(
                f"amplitude length {amps.size} does not match dims {dims} "
                f"(expected {math.prod(dims)})"
            )
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amps", amps)

    @property
    def dim(self) -> int:
        return self.amps.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def is_normalized(self, atol: float = ATOL_NORM) -> bool:
        return abs(self.norm() ** 2 - 1.0) <= atol

    def tensor(self) -> np.ndarray:
        return self.amps.reshape(self.dims)

    def projector(self) -> "DensityMatrix":
        return DensityMatrix(self.dims, np.outer(self.amps, self.amps.conj()))

    def to_dict(self) -> dict:
        return {
            "dims": list(self.dims),
            "amps": [[float(a.real), float(a.imag)] for a in self.amps],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "StateVector":
        dims = _as_dims(data["dims"])
        raw = data["amps"]
        if len(raw) != math.prod(dims):
            raise ValueError(
                f"state file has {len(raw)} amplitudes, dims {dims} require "
                f"{math.prod(dims)}"
            )
        amps = np.array([complex(re, im) for re, im in raw])
        return cls(dims, amps)


@dataclass(frozen=True)
class DensityMatrix:
    """Mixed state: Hermitian PSD unit-trace matrix over subsystem dims."""

    dims: tuple[int, ...]
    mat: np.ndarray

    def __post_init__(self):
        dims = _as_dims(self.dims)
        mat = np.asarray(self.mat, dtype=complex)
        d = math.prod(dims)
        if mat.shape != (d, d):
            raise ValueError(f"matrix shape {mat.shape} does not match dims {dims}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "mat", mat)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def validate(self, atol: float = ATOL_HERMITIAN) -> "DensityMatrix":
        """Check Hermiticity, positivity and unit trace; return self."""
        if np.abs(self.mat - self.mat.conj().T).max() > atol:
            raise ValueError("density matrix is not Hermitian within tolerance")
        if abs(np.trace(self.mat).real - 1.0) > ATOL_TRACE:
            raise ValueError(f"density matrix trace {np.trace(self.mat):.3g} != 1")
        w = np.linalg.eigvalsh((self.mat + self.mat.conj().T) / 2)
        if w.min() < -ATOL_EIG:
            raise ValueError(f"density matrix has negative eigenvalue {w.min():.3g}")
        return self

    def rank(self, cutoff: float = EIG_CUTOFF) -> int:
        w = np.linalg.eigvalsh((self.mat + self.mat.conj().T) / 2)
        return int(np.sum(w > cutoff))


@dataclass(frozen=True)
class Ensemble:
    """Weighted pure-state decomposition {p_i, |pi_i>} of a density matrix."""

    members: tuple[tuple[float, StateVector], ...]

    def __post_init__(self):
        members = tuple((float(w), s) for w, s in self.members)
        if not members:
            raise ValueError("ensemble must have at least one member")
        dims = members[0][1].dims
        if any(s.dims != dims for _, s in members):
            raise ValueError("ensemble members must share subsystem dims")
        if any(w < -ATOL_WEIGHTS for w, _ in members):
            raise ValueError("ensemble weights must be nonnegative")
        total = sum(w for w, _ in members)
        if abs(total - 1.0) > ATOL_WEIGHTS:
            raise ValueError(f"ensemble weights sum to {total}, expected 1")
        object.__setattr__(self, "members", members)

    @property
    def dims(self) -> tuple[int, ...]:
        return self.members[0][1].dims

    def weights(self) -> np.ndarray:
        return np.array([w for w, _ in self.members])

    def density_matrix(self) -> DensityMatrix:
        d = math.prod(self.dims)
        rho = np.zeros((d, d), dtype=complex)
        for w, s in self.members:
            rho += w * np.outer(s.amps, s.amps.conj())
        return DensityMatrix(self.dims, rho)

    def reconstructs(self, dm: DensityMatrix, atol: float = ATOL_RECONSTRUCT) -> bool:
        return float(np.linalg.norm(self.density_matrix().mat - dm.mat)) <= atol

    def to_dict(self) -> dict:
        return {
            "weights": [w for w, _ in self.members],
            "states": [s.to_dict() for _, s in self.members],
        }


@dataclass(frozen=True)
class LocalOperator:
    """A matrix acting on a single subsystem."""

    site: int
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"local operator must be square, got shape {mat.shape}")
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "site", int(self.site))


def kraus_is_complete(ops: list[LocalOperator], atol: float = ATOL_KRAUS) -> bool:
    """True when sum of M^dag M over the set equals the identity."""
    if not ops:
        return False
    d = ops[0].matrix.shape[0]
    total = sum(op.matrix.conj().T @ op.matrix for op in ops)
    return bool(np.abs(total - np.eye(d)).max() <= atol)


def normalize(state: StateVector) -> StateVector:
    """Rescale to unit norm, preserving direction."""
    n = state.norm()
    if n < 1e-150:
        raise ZeroStateError("cannot normalize a zero state vector")
    return StateVector(state.dims, state.amps / n)


def _to_density(obj) -> DensityMatrix:
    if isinstance(obj, StateVector):
        return obj.projector()
    if isinstance(obj, DensityMatrix):
        return obj
    raise TypeError(f"expected StateVector or DensityMatrix, got {type(obj)!r}")


def partial_trace(dm, keep) -> DensityMatrix:
    """Trace out every subsystem not listed in ``keep``.

    Accepts a StateVector (its projector is formed first) or DensityMatrix.
    Kept subsystems stay in their original relative order.
    """
    dm = _to_density(dm)
    n = len(dm.dims)
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise ValueError("keep set must be non-empty")
    if any(k < 0 or k >= n for k in keep):
        raise ValueError(f"keep indices {keep} out of range for {n} subsystems")
    traced = [i for i in range(n) if i not in keep]
    tensor = dm.mat.reshape(dm.dims + dm.dims)
    dims = list(dm.dims)
    for idx in sorted(traced, reverse=True):
        tensor = np.trace(tensor, axis1=idx, axis2=idx + len(dims))
        del dims[idx]
    d = math.prod(dims)
    return DensityMatrix(tuple(dims), tensor.reshape(d, d))


def apply_local(state: StateVector, ops: list[LocalOperator]) -> tuple[StateVector, float]:
    """Apply a product of single-site operators; sites not listed get identity.

    Returns the unnormalized transformed vector and its squared norm, which is
    the outcome probability when the operators come from a Kraus set and the
    input is normalized.
    """
    seen = set()
    for op in ops:
        if op.site < 0 or op.site >= len(state.dims):
            raise ValueError(f"operator site {op.site} out of range")
        if op.site in seen:
            raise ValueError(f"duplicate operator for site {op.site}")
        if op.matrix.shape[0] != state.dims[op.site]:
            raise ValueError(
                f"operator on site {op.site} has dimension {op.matrix.shape[0]}, "
                f"site dimension is {state.dims[op.site]}"
            )
        seen.add(op.site)
    tensor = state.tensor()
    n = len(state.dims)
    for op in ops:
        tensor = np.tensordot(op.matrix, tensor, axes=([1], [op.site]))
        tensor = np.moveaxis(tensor, 0, op.site)
    out = tensor.reshape(-1)
    prob = float(np.vdot(out, out).real)
    return StateVector(state.dims, out), prob


def eigendecompose(dm: DensityMatrix, cutoff: float = EIG_CUTOFF) -> Ensemble:
    """Spectral decomposition as an ensemble; eigenvalues below cutoff dropped."""
    herm_err = np.abs(dm.mat - dm.mat.conj().T).max()
    if herm_err > ATOL_HERMITIAN:
        raise ValueError(f"matrix is not Hermitian (deviation {herm_err:.3g})")
    w, v = np.linalg.eigh((dm.mat + dm.mat.conj().T) / 2)
    order = np.argsort(w)[::-1]
    members = []
    for i in order:
        if w[i] < cutoff:
            continue
        members.append((float(w[i]), StateVector(dm.dims, v[:, i])))
    if not members:
        raise ValueError("density matrix has no eigenvalue above cutoff")
    return Ensemble(tuple(members))


# ---------------------------------------------------------------------------
# Seeded random generators


def random_pure(dims, seed) -> StateVector:
    """Haar-distributed normalized pure state on the given dims."""
    dims = _as_dims(dims)
    rng = np.random.default_rng(seed)
    d = math.prod(dims)
    z = rng.normal(size=d) + 1j * rng.normal(size=d)
    return StateVector(dims, z / np.linalg.norm(z))


def random_unitary(dim: int, seed) -> np.ndarray:
    """Haar-distributed unitary (QR of a Ginibre matrix, phases fixed)."""
    rng = np.random.default_rng(seed)
    return haar_unitaries(1, dim, rng)[0]


def haar_unitaries(count: int, dim: int, rng: np.random.Generator) -> np.ndarray:
    """Batch of Haar unitaries, shape (count, dim, dim)."""
    z = (rng.normal(size=(count, dim, dim)) + 1j * rng.normal(size=(count, dim, dim)))
    q, r = np.linalg.qr(z)
    diag = np.einsum("kii->ki", r)
    return q * (diag / np.abs(diag))[:, None, :]


def random_invertible_local(seed, site: int = 0, dim: int = 2) -> LocalOperator:
    """Random invertible single-site filter with largest singular value 1.

    A single-outcome SLOCC filter: M^dag M <= I, determinant nonzero.
    """
    rng = np.random.default_rng(seed)
    while True:
        m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        s = np.linalg.svd(m, compute_uv=False)
        if s[-1] / s[0] > 1e-3:  # avoid near-singular draws
            return LocalOperator(site, m / s[0])


def random_kraus_set(dim: int, count: int, seed, site: int = 0) -> list[LocalOperator]:
    """Random complete Kraus set: Ginibre blocks whitened against their sum."""
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = np.random.default_rng(seed)
    blocks = rng.normal(size=(count, dim, dim)) + 1j * rng.normal(size=(count, dim, dim))
    total = np.einsum("kji,kjl->il", blocks.conj(), blocks)
    w, v = np.linalg.eigh(total)
    inv_sqrt = (v / np.sqrt(w)) @ v.conj().T
    return [LocalOperator(site, b @ inv_sqrt) for b in blocks]


def random_separable_4q(pattern: str, seed) -> StateVector:
    """Random 4-qubit pure state separable across the named bipartition.

    Patterns: "A|BCD", "AB|CD", "ABC|D". Each factor is Haar random.
    """
    splits = {"A|BCD": (1, 3), "AB|CD": (2, 2), "ABC|D": (3, 1)}
    if pattern not in splits:
        raise ValueError(f"unknown separability pattern {pattern!r}")
    left, right = splits[pattern]
    ss = np.random.SeedSequence(seed).spawn(2)
    a = random_pure((2,) * left, ss[0])
    b = random_pure((2,) * right, ss[1])
    return StateVector((2, 2, 2, 2), np.kron(a.amps, b.amps))


# ---------------------------------------------------------------------------
# State file I/O: {"dims": [...], "amps": [[re, im], ...]}, big-endian


def save_state(path, state: StateVector) -> None:
    with open(path, "w") as fh:
        json.dump(state.to_dict(), fh)
        fh.write("\n")


def load_state(path) -> StateVector:
    with open(path) as fh:
        return StateVector.from_dict(json.load(fh))
