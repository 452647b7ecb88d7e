"""Localized quadripartite entanglement of (2x2x2xn) pure states.

tau4 = sqrt(tau_a^2 - tau3^2) of the three-qubit state left after tracing
the chosen subsystem: how much ensemble-average 3-tangle a measurement on
the traced party can unlock beyond what is already there. Both roof values
come from the same pair of optimizations with cross-evaluated witnesses,
so tau_a >= tau3 holds exactly at the estimate level and the reported
tau4 is simultaneously the certified lower bound built from the witness
bound directions.

The quantity depends on which subsystem is traced, so traced_site is an
explicit argument everywhere and a four-component vector (one value per
traced subsystem) characterizes a four-qubit state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .convexroof import RoofConfig, RoofResult, roof_pair
from .qstate import (
    DensityMatrix,
    LocalOperator,
    StateVector,
    apply_local,
    kraus_is_complete,
    normalize,
    partial_trace,
    random_kraus_set,
    random_pure,
)

PROB_CUTOFF = 1e-12
DEFAULT_VIOLATION_TOL = 2e-2
DEFAULT_NONZERO_MARGIN = 5e-2


@dataclass(frozen=True)
class Tau4Report:
    tau4: float
    tau_a: RoofResult
    tau3: RoofResult
    certified_lower: float
    traced_site: int | None = None

    def to_dict(self) -> dict:
        return {
            "tau4": self.tau4,
            "certified_lower": self.certified_lower,
            "traced_site": self.traced_site,
            "tau_a": self.tau_a.to_dict(),
            "tau3": self.tau3.to_dict(),
        }


@dataclass(frozen=True)
class EntanglementVector:
    """tau4 for tracing subsystem 0, 1, 2, 3 of a four-qubit state, in order."""

    components: tuple[float, float, float, float]
    reports: tuple[Tau4Report, ...] = field(repr=False, default=())

    def to_dict(self) -> dict:
        return {"components": list(self.components)}


@dataclass(frozen=True)
class NonzeroDecision:
    certified: bool
    lower_bound: float
    gap: float
    report: Tau4Report = field(repr=False)

    def to_dict(self) -> dict:
        return {
            "certified_nonzero": self.certified,
            "lower_bound": self.lower_bound,
            "gap": self.gap,
        }


def _tau4_from_pair(lo: RoofResult, hi: RoofResult) -> float:
    gap = max(0.0, hi.value ** 2 - lo.value ** 2)
    return min(math.sqrt(gap), 1.0)


def tau4_of_dm(dm: DensityMatrix, config: RoofConfig | None = None,
               traced_site: int | None = None) -> Tau4Report:
    """tau4 of a three-qubit density matrix from both roof optimizations.

    The numerical value is a lower-biased estimate of the true tau4: the
    assistance side is under-estimated and the roof side over-estimated.
    """
    lo, hi = roof_pair(dm, config)
    value = _tau4_from_pair(lo, hi)
    return Tau4Report(tau4=value, tau_a=hi, tau3=lo,
                      certified_lower=value, traced_site=traced_site)


def _check_pure4(state: StateVector, traced_site: int) -> None:
    if len(state.dims) != 4:
        raise ValueError(f"expected a four-party state, got dims {state.dims}")
    if traced_site < 0 or traced_site >= 4:
        raise ValueError(f"traced_site {traced_site} out of range")
    kept = [d for i, d in enumerate(state.dims) if i != traced_site]
    if kept != [2, 2, 2]:
        raise ValueError(
            f"the three kept sites must be qubits; dims {state.dims} with "
            f"site {traced_site} traced leave {tuple(kept)}"
        )
    if not state.is_normalized(1e-8):
        raise ValueError("input state must be normalized")


def tau4_pure4(state: StateVector, traced_site: int,
               config: RoofConfig | None = None) -> Tau4Report:
    """tau4 of a four-party pure state after tracing out one subsystem."""
    _check_pure4(state, traced_site)
    keep = [i for i in range(4) if i != traced_site]
    rho = partial_trace(state, keep)
    return tau4_of_dm(rho, config, traced_site=traced_site)


def entanglement_vector(state: StateVector,
                        config: RoofConfig | None = None) -> EntanglementVector:
    if tuple(state.dims) != (2, 2, 2, 2):
        raise ValueError(f"entanglement vector requires four qubits, got {state.dims}")
    reports = tuple(tau4_pure4(state, site, config) for site in range(4))
    return EntanglementVector(
        components=tuple(r.tau4 for r in reports), reports=reports
    )


def certify_nonzero(state: StateVector, traced_site: int,
                    config: RoofConfig | None = None,
                    margin: float = DEFAULT_NONZERO_MARGIN) -> NonzeroDecision:
    """Decide whether tau4 is provably nonzero from the witness ensembles.

    The assistance witness average is a true lower bound on tau_a and the
    roof witness average a true upper bound on tau3, so a positive gap
    certifies tau4 >= sqrt(max^2 - min^2); gaps below ``margin`` are
    reported as consistent with zero.
    """
    report = tau4_pure4(state, traced_site, config)
    gap = report.tau_a.value - report.tau3.value
    return NonzeroDecision(
        certified=bool(gap > margin),
        lower_bound=report.certified_lower,
        gap=gap,
        report=report,
    )


# ---------------------------------------------------------------------------
# Sequential SLOCC round (five stages of classically coordinated Kraus maps)


@dataclass(frozen=True)
class SloccProtocol:
    """One adaptive measurement round: S, then A, B, C conditioned on all
    earlier outcomes, then S again.

    Each stage maps the tuple of earlier outcomes to a complete Kraus set;
    matrices act on the site assigned by the round that runs the protocol.
    """

    s_first: tuple[np.ndarray, ...]
    a_stage: dict[tuple[int, ...], tuple[np.ndarray, ...]]
    b_stage: dict[tuple[int, ...], tuple[np.ndarray, ...]]
    c_stage: dict[tuple[int, ...], tuple[np.ndarray, ...]]
    s_last: dict[tuple[int, ...], tuple[np.ndarray, ...]]

    def validate(self, atol: float = 1e-9) -> "SloccProtocol":
        stages = [(("",), {(): self.s_first})]
        stages += [((), d) for d in (self.a_stage, self.b_stage, self.c_stage, self.s_last)]
        for _, table in stages:
            for history, ops in table.items():
                wrapped = [LocalOperator(0, m) for m in ops]
                if not kraus_is_complete(wrapped, atol):
                    raise ValueError(
                        f"incomplete Kraus set at history {history!r}"
                    )
        return self

    @classmethod
    def identity(cls, s_dim: int = 2) -> "SloccProtocol":
        eye_q = (np.eye(2, dtype=complex),)
        eye_s = (np.eye(s_dim, dtype=complex),)
        return cls(
            s_first=eye_s,
            a_stage={(0,): eye_q},
            b_stage={(0, 0): eye_q},
            c_stage={(0, 0, 0): eye_q},
            s_last={(0, 0, 0, 0): eye_s},
        )

    @classmethod
    def random(cls, seed, outcomes: int = 2, s_dim: int = 2) -> "SloccProtocol":
        """Random protocol with a fresh complete Kraus set at every history."""
        ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
        seeds = iter(ss.spawn(
            1 + outcomes + outcomes ** 2 + outcomes ** 3 + outcomes ** 4))

        def draw(dim):
            return tuple(op.matrix for op in random_kraus_set(dim, outcomes, next(seeds)))

        s_first = draw(s_dim)
        a_stage = {(i,): draw(2) for i in range(outcomes)}
        b_stage = {(i, j): draw(2) for i in range(outcomes) for j in range(outcomes)}
        c_stage = {(i, j, k): draw(2)
                   for i in range(outcomes) for j in range(outcomes)
                   for k in range(outcomes)}
        s_last = {(i, j, k, l): draw(s_dim)
                  for i in range(outcomes) for j in range(outcomes)
                  for k in range(outcomes) for l in range(outcomes)}
        return cls(s_first, a_stage, b_stage, c_stage, s_last)


def slocc_round(state: StateVector, protocol: SloccProtocol,
                traced_site: int = 3) -> list[tuple[float, StateVector]]:
    """Enumerate all outcome branches of one protocol round.

    Returns (probability, post-state) per outcome tuple; probabilities sum
    to one and post-states with non-negligible probability are normalized.
    """
    _check_pure4(state, traced_site)
    protocol.validate()
    kept = [i for i in range(4) if i != traced_site]
    outcomes = []
    for i, m_op in enumerate(protocol.s_first):
        for j, a_op in enumerate(protocol.a_stage[(i,)]):
            for k, b_op in enumerate(protocol.b_stage[(i, j)]):
                for l, c_op in enumerate(protocol.c_stage[(i, j, k)]):
                    for f_op in protocol.s_last[(i, j, k, l)]:
                        ops = [
                            LocalOperator(kept[0], a_op),
                            LocalOperator(kept[1], b_op),
                            LocalOperator(kept[2], c_op),
                            LocalOperator(traced_site, f_op @ m_op),
                        ]
                        post, prob = apply_local(state, ops)
                        if prob > 1e-30:
                            post = normalize(post)
                        outcomes.append((prob, post))
    total = sum(p for p, _ in outcomes)
    if abs(total - 1.0) > 1e-8:
        raise ValueError(f"branch probabilities sum to {total}, expected 1")
    return outcomes


# ---------------------------------------------------------------------------
# Property harnesses


def light_config(config: RoofConfig) -> RoofConfig:
    """Cheap variant used where a lower-biased estimate is on the safe side."""
    return replace(
        config,
        restarts=max(2, config.restarts // 16),
        max_iterations=max(100, config.max_iterations // 20),
    )


@dataclass(frozen=True)
class MonotonicityReport:
    pre_tau4: float
    averages: tuple[float, ...]
    max_violation: float
    tolerance: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "pre_tau4": self.pre_tau4,
            "averages": list(self.averages),
            "max_violation": self.max_violation,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def check_monotonicity(state: StateVector, trials: int, seed,
                       config: RoofConfig | None = None,
                       traced_site: int = 3,
                       tolerance: float = DEFAULT_VIOLATION_TOL,
                       post_config: RoofConfig | None = None) -> MonotonicityReport:
    """Compare the branch-averaged tau4 after random protocol rounds with
    the input value.

    The estimator is lower-biased on both sides, so the input state uses the
    full configuration while branches default to a light one: under-estimating
    a branch can only make the comparison easier to satisfy, never fake a
    violation.
    """
    cfg = config or RoofConfig()
    post_cfg = post_config or light_config(cfg)
    pre = tau4_pure4(state, traced_site, cfg)
    averages = []
    for trial_seed in np.random.SeedSequence(seed).spawn(trials):
        protocol = SloccProtocol.random(trial_seed, s_dim=state.dims[traced_site])
        total = 0.0
        for prob, post in slocc_round(state, protocol, traced_site):
            if prob < PROB_CUTOFF:
                continue
            total += prob * tau4_pure4(post, traced_site, post_cfg).tau4
        averages.append(total)
    max_violation = max((a - pre.tau4 for a in averages), default=-math.inf)
    return MonotonicityReport(
        pre_tau4=pre.tau4,
        averages=tuple(averages),
        max_violation=max_violation,
        tolerance=tolerance,
        passed=bool(max_violation <= tolerance),
    )


@dataclass(frozen=True)
class ConcavityReport:
    endpoint_values: tuple[float, float]
    mixture_values: tuple[float, ...]
    lambdas: tuple[float, ...]
    max_violation: float
    tolerance: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "endpoint_values": list(self.endpoint_values),
            "mixture_values": list(self.mixture_values),
            "lambdas": list(self.lambdas),
            "max_violation": self.max_violation,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def check_concavity(dm1: DensityMatrix, dm2: DensityMatrix, lambda_grid,
                    config: RoofConfig | None = None,
                    tolerance: float = DEFAULT_VIOLATION_TOL,
                    endpoint_config: RoofConfig | None = None) -> ConcavityReport:
    """Verify tau4 of a mixture dominates the mixture of tau4 values.

    Mixtures use the full configuration (under-estimating them would fake a
    violation); endpoints default to a light one for the opposite reason.
    """
    if tuple(dm1.dims) != (2, 2, 2) or tuple(dm2.dims) != (2, 2, 2):
        raise ValueError("concavity check requires three-qubit density matrices")
    lambdas = tuple(float(x) for x in lambda_grid)
    if any(x < 0 or x > 1 for x in lambdas):
        raise ValueError("lambda values must lie in [0, 1]")
    cfg = config or RoofConfig()
    end_cfg = endpoint_config or light_config(cfg)
    v1 = tau4_of_dm(dm1, end_cfg).tau4
    v2 = tau4_of_dm(dm2, end_cfg).tau4
    mixture_values = []
    max_violation = -math.inf
    for lam in lambdas:
        mixed = DensityMatrix(dm1.dims, lam * dm1.mat + (1 - lam) * dm2.mat)
        vm = tau4_of_dm(mixed, cfg).tau4
        mixture_values.append(vm)
        max_violation = max(max_violation, lam * v1 + (1 - lam) * v2 - vm)
    return ConcavityReport(
        endpoint_values=(v1, v2),
        mixture_values=tuple(mixture_values),
        lambdas=lambdas,
        max_violation=max_violation,
        tolerance=tolerance,
        passed=bool(max_violation <= tolerance),
    )


def random_tau4_state(seed) -> StateVector:
    """Haar-random four-qubit pure state (convenience for the harnesses)."""
    return random_pure((2, 2, 2, 2), seed)
