"""Batch property suites behind the ``verify`` command.

Each suite draws seeded random instances, exercises one of the claimed
identities or inequalities, and reports the worst case seen. Exact
identities (local-filter covariance, the pure-state concurrence relation)
run at closed-form precision; inequalities involving roof optimization use
tolerances sized to absorb the known one-sided optimizer bias.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .convexroof import RoofConfig
from .measures import det_product, tau3_amplitudes
from .monogamy import check_monogamy, check_pure3_relation
from .qstate import (
    apply_local,
    normalize,
    partial_trace,
    random_invertible_local,
    random_pure,
    random_separable_4q,
)
from .tau4 import check_concavity, check_monotonicity, tau4_pure4

SUITE_NAMES = (
    "covariance", "eq14", "separable-zero", "monotonicity", "concavity", "monogamy",
)

SEPARABLE_PATTERNS = ("A|BCD", "AB|CD", "ABC|D")


@dataclass(frozen=True)
class SuiteReport:
    suite: str
    trials: int
    worst: float
    tolerance: float
    passed: bool
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "trials": self.trials,
            "worst": self.worst,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "detail": dict(self.detail),
        }


def _trial_seeds(seed, count: int) -> list[int]:
    return [int(s) for s in np.random.default_rng(seed).integers(2 ** 62, size=count)]


def covariance_suite(trials: int, seed, tolerance: float = 1e-8) -> SuiteReport:
    """Local-filter covariance of the pure 3-tangle, exact on both sides.

    For invertible A, B, C and a normalized output Psi/n, the 3-tangle picks
    up |det A * det B * det C| / n^2 relative to the input state.
    """
    worst = 0.0
    for ts in _trial_seeds(seed, trials):
        rng = np.random.default_rng(ts)
        state = random_pure((2, 2, 2), rng.integers(2 ** 62))
        ops = [random_invertible_local(rng.integers(2 ** 62), site=s) for s in range(3)]
        out, nsq = apply_local(state, ops)
        lhs = float(tau3_amplitudes(normalize(out).amps))
        rhs = det_product(ops) * float(tau3_amplitudes(state.amps)) / nsq
        rel = abs(lhs - rhs) / max(lhs, rhs, 1e-9)
        worst = max(worst, rel)
    return SuiteReport("covariance", trials, worst, tolerance, worst <= tolerance)


def eq14_suite(trials: int, seed, tolerance: float = 1e-8) -> SuiteReport:
    """Pure-state 3-tangle vs the concurrence route, on random states."""
    worst = 0.0
    for ts in _trial_seeds(seed, trials):
        report = check_pure3_relation(random_pure((2, 2, 2), ts), tolerance)
        worst = max(worst, report.deviation)
    return SuiteReport("eq14", trials, worst, tolerance, worst <= tolerance)


def separable_zero_suite(trials: int, seed, config: RoofConfig | None = None,
                         tolerance: float = 2e-3) -> SuiteReport:
    """tau4 vanishes on random states of each separability pattern.

    ``trials`` counts states per pattern; the last subsystem is traced.
    """
    cfg = config or RoofConfig(restarts=4, max_iterations=400)
    worst = 0.0
    per_pattern = {}
    for p_idx, pattern in enumerate(SEPARABLE_PATTERNS):
        pattern_worst = 0.0
        for ts in _trial_seeds(np.random.SeedSequence([int(seed), p_idx]), trials):
            state = random_separable_4q(pattern, ts)
            value = tau4_pure4(state, 3, replace(cfg, seed=int(ts))).tau4
            pattern_worst = max(pattern_worst, value)
        per_pattern[pattern] = pattern_worst
        worst = max(worst, pattern_worst)
    return SuiteReport("separable-zero", trials * 3, worst, tolerance,
                       worst <= tolerance, detail=per_pattern)


def monotonicity_suite(trials: int, seed, config: RoofConfig | None = None,
                       tolerance: float = 2e-2) -> SuiteReport:
    """Random states under random adaptive rounds never gain tau4 on average."""
    cfg = config or RoofConfig(restarts=8, max_iterations=1500)
    worst = -np.inf
    for ts in _trial_seeds(seed, trials):
        state = random_pure((2, 2, 2, 2), ts)
        report = check_monotonicity(
            state, trials=1, seed=int(ts) + 1,
            config=replace(cfg, seed=int(ts)), tolerance=tolerance,
        )
        worst = max(worst, report.max_violation)
    return SuiteReport("monotonicity", trials, float(worst), tolerance,
                       worst <= tolerance)


def _random_rank2_dm(seed):
    """Rank <= 2 three-qubit state: a random four-qubit pure state traced."""
    return partial_trace(random_pure((2, 2, 2, 2), seed), keep=[0, 1, 2])


def concavity_suite(trials: int, seed, config: RoofConfig | None = None,
                    lambdas=(0.25, 0.5, 0.75),
                    tolerance: float = 2e-2) -> SuiteReport:
    """Mixing two rank <= 2 states never beats the mixture of tau4 values."""
    cfg = config or RoofConfig(restarts=4, max_iterations=600)
    worst = -np.inf
    for ts in _trial_seeds(seed, trials):
        rng = np.random.default_rng(ts)
        dm1 = _random_rank2_dm(rng.integers(2 ** 62))
        dm2 = _random_rank2_dm(rng.integers(2 ** 62))
        report = check_concavity(dm1, dm2, lambdas,
                                 config=replace(cfg, seed=int(ts)),
                                 tolerance=tolerance)
        worst = max(worst, report.max_violation)
    return SuiteReport("concavity", trials, float(worst), tolerance,
                       worst <= tolerance)


def monogamy_suite(trials: int, seed, config: RoofConfig | None = None,
                   tolerance: float = 1e-2) -> SuiteReport:
    """Random four-qubit states satisfy the merged-party trade-off."""
    cfg = config or RoofConfig(restarts=4, max_iterations=800)
    worst = -np.inf  # worst = largest lhs - rhs
    for ts in _trial_seeds(seed, trials):
        state = random_pure((2, 2, 2, 2), ts)
        report = check_monogamy(state, replace(cfg, seed=int(ts)), tolerance)
        worst = max(worst, -report.gap)
    return SuiteReport("monogamy", trials, float(worst), tolerance,
                       worst <= tolerance)


def run_suite(name: str, trials: int, seed,
              config: RoofConfig | None = None,
              tolerance: float | None = None) -> SuiteReport:
    """Dispatch a named suite with its default tolerance unless overridden."""
    runners = {
        "covariance": (covariance_suite, 1e-8),
        "eq14": (eq14_suite, 1e-8),
        "separable-zero": (separable_zero_suite, 2e-3),
        "monotonicity": (monotonicity_suite, 2e-2),
        "concavity": (concavity_suite, 2e-2),
        "monogamy": (monogamy_suite, 1e-2),
    }
    if name not in runners:
        raise ValueError(f"unknown suite {name!r}; choose from {SUITE_NAMES}")
    runner, default_tol = runners[name]
    tol = default_tol if tolerance is None else tolerance
    if name in ("covariance", "eq14"):
        return runner(trials, seed, tol)
    return runner(trials, seed, config, tolerance=tol)
