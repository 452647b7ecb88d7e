"""Numerical convex-roof engine for the mixed-state 3-tangle.

Every length-m decomposition of a rank-r density matrix arises from an
m x m unitary mixing the scaled spectral vectors (purification freedom),
so the roof is searched over unitaries parametrized as the exponential of
an anti-Hermitian matrix built from m^2 real parameters. The objective,
the ensemble-average 3-tangle, is evaluated on the subnormalized mixed
vectors directly: tau3 is homogeneous of degree two in the amplitudes, so
sum_i tau3(pi~_i) equals sum_i p_i tau3(pi_i) without any normalization.

The search minimizes (roof) or maximizes (assistance) with a derivative
free simplex method per restart. Any decomposition the search visits is a
valid one, so the reported minimum is a certified upper bound on tau3 and
the reported maximum a certified lower bound on tau_a.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import minimize

from .measures import tau3_amplitudes
from .qstate import DensityMatrix, Ensemble, StateVector, eigendecompose, haar_unitaries

EIG_CUTOFF = 1e-12
UNITARY_ATOL = 1e-9
SCREEN_CANDIDATES = 64
SIMPLEX_STEP = 0.3
# certain bounds of the objective on normalized input; used to stop restarts early
FLOOR, CEIL = 1e-12, 1.0 - 1e-12
# objective spread over the first screening batch below which the landscape is
# treated as constant (tau_a = tau3 states make it exactly constant; the sqrt
# in tau3 turns float dust in the invariant into ~1e-8 objective noise)
FLAT_SPREAD = 1e-7
# stop restarting after this many consecutive restarts without improvement
STALL_WINDOW = 8


@dataclass(frozen=True)
class RoofConfig:
    """Search-family parameters for one roof optimization."""

    ensemble_length: int | None = None  # default max(rank, min(rank^2, 4))
    restarts: int = 32
    max_iterations: int = 2000
    tolerance: float = 1e-8
    seed: int = 7

    def resolve_length(self, rank: int) -> int:
        m = self.ensemble_length
        if m is None:
            m = max(rank, min(rank * rank, 4))
        if m < rank:
            raise ValueError(f"ensemble length {m} below state rank {rank}")
        return int(m)


@dataclass(frozen=True)
class RoofResult:
    value: float
    witness: Ensemble
    bound_direction: str  # "upper-bound-on-min" | "lower-bound-on-max"
    iterations: int
    restarts_used: int
    best_restart: int

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "bound_direction": self.bound_direction,
            "iterations": self.iterations,
            "restarts_used": self.restarts_used,
            "best_restart": self.best_restart,
            "witness": self.witness.to_dict(),
        }


def _spectral_arrays(dm: DensityMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues above cutoff and their eigenvectors as rows."""
    w, v = np.linalg.eigh((dm.mat + dm.mat.conj().T) / 2)
    keep = w > EIG_CUTOFF
    order = np.argsort(w[keep])[::-1]
    lam = w[keep][order]
    vecs = v[:, keep][:, order].T
    return lam, vecs


def _theta_split(m: int) -> tuple[np.ndarray, np.ndarray]:
    return np.triu_indices(m, 1)


def unitary_from_params(theta: np.ndarray, m: int) -> np.ndarray:
    """m x m unitary exp(iH) with H Hermitian built from m^2 real parameters."""
    theta = np.asarray(theta, dtype=float)
    if theta.size != m * m:
        raise ValueError(f"expected {m * m} parameters, got {theta.size}")
    iu, ju = _theta_split(m)
    k = len(iu)
    h = np.zeros((m, m), dtype=complex)
    h[np.arange(m), np.arange(m)] = theta[:m]
    h[iu, ju] = theta[m:m + k] + 1j * theta[m + k:]
    h[ju, iu] = theta[m:m + k] - 1j * theta[m + k:]
    w, v = np.linalg.eigh(h)
    return (v * np.exp(1j * w)) @ v.conj().T


def _batched_unitaries(thetas: np.ndarray, m: int) -> np.ndarray:
    iu, ju = _theta_split(m)
    k = len(iu)
    n = thetas.shape[0]
    h = np.zeros((n, m, m), dtype=complex)
    h[:, np.arange(m), np.arange(m)] = thetas[:, :m]
    h[:, iu, ju] = thetas[:, m:m + k] + 1j * thetas[:, m + k:]
    h[:, ju, iu] = thetas[:, m:m + k] - 1j * thetas[:, m + k:]
    w, v = np.linalg.eigh(h)
    return np.einsum("nij,nj,nkj->nik", v, np.exp(1j * w), v.conj())


def ensemble_from_unitary(spectral: Ensemble, unitary: np.ndarray) -> Ensemble:
    """Decomposition generated by mixing the spectral ensemble with a unitary.

    Row i of the unitary gives the subnormalized member
    pi~_i = sum_j U_ij sqrt(lam_j) |e_j>; its squared norm is the weight.
    The output realizes the same density matrix for any unitary.
    """
    u = np.asarray(unitary, dtype=complex)
    m = u.shape[0]
    if u.shape != (m, m):
        raise ValueError("mixing matrix must be square")
    if np.abs(u @ u.conj().T - np.eye(m)).max() > UNITARY_ATOL:
        raise ValueError("mixing matrix is not unitary within tolerance")
    r = len(spectral.members)
    if m < r:
        raise ValueError(f"mixing matrix side {m} below spectral rank {r}")
    lam = spectral.weights()
    vecs = np.array([s.amps for _, s in spectral.members])
    sub = u[:, :r] @ (np.sqrt(lam)[:, None] * vecs)
    dims = spectral.dims
    members = []
    for row in sub:
        p = float(np.vdot(row, row).real)
        if p < 1e-30:
            placeholder = np.zeros(row.size, dtype=complex)
            placeholder[0] = 1.0
            members.append((0.0, StateVector(dims, placeholder)))
        else:
            members.append((p, StateVector(dims, row / math.sqrt(p))))
    return Ensemble(tuple(members))


def _restart_seeds(seed: int, objective: str, count: int) -> list[np.random.SeedSequence]:
    child = {"min": 0, "max": 1}[objective]
    return np.random.SeedSequence(seed).spawn(2)[child].spawn(count)


def optimize_roof(dm: DensityMatrix, objective: str, config: RoofConfig | None = None) -> RoofResult:
    """Search decompositions of a three-qubit state for extremal average tau3.

    objective "min" returns a certified upper bound on the 3-tangle roof,
    "max" a certified lower bound on the 3-tangle of assistance; the witness
    ensemble achieving the reported value is returned alongside.
    """
    if tuple(dm.dims) != (2, 2, 2):
        raise ValueError(f"roof optimization requires dims (2, 2, 2), got {dm.dims}")
    if objective not in ("min", "max"):
        raise ValueError(f"objective must be 'min' or 'max', got {objective!r}")
    cfg = config or RoofConfig()
    lam, vecs = _spectral_arrays(dm)
    r = len(lam)
    m = cfg.resolve_length(r)
    scaled = np.sqrt(lam)[:, None] * vecs  # r x 8

    spectral_members = tuple(
        (float(w), StateVector(dm.dims, v)) for w, v in zip(lam, vecs)
    )
    spectral = Ensemble(spectral_members)

    if m == 1:
        value = float(tau3_amplitudes(scaled[0]))
        return RoofResult(
            value=min(max(value, 0.0), 1.0),
            witness=spectral,
            bound_direction="upper-bound-on-min" if objective == "min" else "lower-bound-on-max",
            iterations=0,
            restarts_used=1,
            best_restart=0,
        )

    sign = 1.0 if objective == "min" else -1.0

    def fun(theta: np.ndarray) -> float:
        u = unitary_from_params(theta, m)
        rows = u[:, :r] @ scaled
        return sign * float(tau3_amplitudes(rows).sum())

    def screened_start(rng: np.random.Generator, include_zero: bool) -> tuple[np.ndarray, float]:
        thetas = rng.normal(size=(SCREEN_CANDIDATES, m * m))
        if include_zero:
            thetas[0] = 0.0
        units = _batched_unitaries(thetas, m)
        rows = units[:, :, :r] @ scaled
        vals = sign * tau3_amplitudes(rows).sum(axis=1)
        return thetas[int(np.argmin(vals))], float(vals.max() - vals.min())

    nparams = m * m
    best_val = np.inf
    best_theta = None
    best_restart = 0
    iterations = 0
    restarts_used = 0
    last_improvement = 0
    flat = False
    for k, seed in enumerate(_restart_seeds(cfg.seed, objective, cfg.restarts)):
        rng = np.random.default_rng(seed)
        x0, spread = screened_start(rng, include_zero=(k == 0))
        if k == 0 and spread <= FLAT_SPREAD:
            # tau_a = tau3 makes the average identical for every decomposition;
            # a short polish suffices and the result stays a certified bound
            flat = True
        maxiter = min(cfg.max_iterations, 150) if flat else cfg.max_iterations
        sim = np.vstack([x0, x0 + SIMPLEX_STEP * np.eye(nparams)])
        res = minimize(
            fun,
            x0,
            method="Nelder-Mead",
            options={
                "maxiter": maxiter,
                "fatol": cfg.tolerance,
                "xatol": 1e-6,
                "adaptive": True,
                "initial_simplex": sim,
            },
        )
        iterations += int(res.nit)
        restarts_used += 1
        if res.fun < best_val:
            if res.fun < best_val - max(cfg.tolerance, 1e-10):
                last_improvement = k
            best_val = float(res.fun)
            best_theta = np.array(res.x)
            best_restart = k
        if sign * best_val <= FLOOR or sign * best_val >= CEIL:
            break  # cannot improve on a certain bound of the objective
        if flat or k - last_improvement >= STALL_WINDOW:
            break

    witness = ensemble_from_unitary(spectral, unitary_from_params(best_theta, m))
    value = sign * best_val
    return RoofResult(
        value=min(max(value, 0.0), 1.0),
        witness=witness,
        bound_direction="upper-bound-on-min" if objective == "min" else "lower-bound-on-max",
        iterations=iterations,
        restarts_used=restarts_used,
        best_restart=best_restart,
    )


def witness_average_tau3(ensemble: Ensemble) -> float:
    """Ensemble-average 3-tangle, the quantity the roof extremizes."""
    return float(sum(w * float(tau3_amplitudes(s.amps)) for w, s in ensemble.members))


def roof_pair(dm: DensityMatrix, config: RoofConfig | None = None) -> tuple[RoofResult, RoofResult]:
    """Both roof directions with cross-evaluated witnesses.

    Each witness is a valid decomposition, so the smaller of the two averages
    certifies the upper bound on tau3 and the larger the lower bound on
    tau_a; swapping when the searches cross guarantees
    pair[1].value >= pair[0].value exactly.
    """
    lo = optimize_roof(dm, "min", config)
    hi = optimize_roof(dm, "max", config)
    if hi.value < lo.value:
        lo, hi = (
            replace(hi, bound_direction="upper-bound-on-min"),
            replace(lo, bound_direction="lower-bound-on-max"),
        )
    return lo, hi


def tau3_mixed(dm: DensityMatrix, config: RoofConfig | None = None) -> RoofResult:
    """Convex-roof 3-tangle (certified upper bound, witness attached)."""
    return roof_pair(dm, config)[0]


def tau_a(dm: DensityMatrix, config: RoofConfig | None = None) -> RoofResult:
    """3-tangle of assistance (certified lower bound, witness attached)."""
    return roof_pair(dm, config)[1]


def grid_oracle(dm: DensityMatrix, samples: int, seed) -> tuple[float, float]:
    """Brute-force sweep of random decompositions, for cross-checking only.

    Draws ``samples`` Haar unitaries at every ensemble length from the rank
    up to 4 and returns the smallest and largest average tau3 seen.
    """
    if tuple(dm.dims) != (2, 2, 2):
        raise ValueError(f"grid oracle requires dims (2, 2, 2), got {dm.dims}")
    lam, vecs = _spectral_arrays(dm)
    r = len(lam)
    if r > 4:
        raise ValueError(f"grid oracle supports rank <= 4, got {r}")
    scaled = np.sqrt(lam)[:, None] * vecs
    rng = np.random.default_rng(seed)
    best_min, best_max = np.inf, -np.inf
    for m in range(r, 5):
        left = samples
        while left > 0:
            chunk = min(left, 20000)
            units = haar_unitaries(chunk, m, rng)
            rows = units[:, :, :r] @ scaled
            avg = tau3_amplitudes(rows).sum(axis=1)
            best_min = min(best_min, float(avg.min()))
            best_max = max(best_max, float(avg.max()))
            left -= chunk
    return best_min, best_max


def spectral_ensemble(dm: DensityMatrix) -> Ensemble:
    """Spectral decomposition used as the roof parametrization seed."""
    return eigendecompose(dm)
