"""Monogamy trade-off for four-qubit pure states.

The localized entanglement seen from the first qubit competes with the
3-tangle already present in the remaining three: the sum of their squares
is bounded by the squared 3-tangle of the state with the first two qubits
merged into one party. The merged-party 3-tangle has a closed form through
two-qubit concurrences, so the bound side needs no optimization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .convexroof import RoofConfig, roof_pair
from .measures import concurrence_assist_2q, concurrence_mixed_2q, tau3_pure
from .qstate import StateVector, partial_trace

DEFAULT_MONOGAMY_TOL = 1e-2
PURE3_TOL = 1e-8


def tau3_merged_AB(state: StateVector) -> float:
    """3-tangle of a four-qubit pure state with qubits A and B as one party.

    Computed as sqrt(C_a^2 - C^2) of the two-qubit state of C and D, the
    closed-form route valid for any pure state of a (4 x 2 x 2) split.
    """
    if tuple(state.dims) != (2, 2, 2, 2):
        raise ValueError(f"merged-party 3-tangle requires four qubits, got {state.dims}")
    rho_cd = partial_trace(state, keep=[2, 3])
    ca = concurrence_assist_2q(rho_cd).value
    c = concurrence_mixed_2q(rho_cd).value
    return math.sqrt(max(0.0, ca * ca - c * c))


@dataclass(frozen=True)
class MonogamyReport:
    lhs: float
    rhs: float
    gap: float
    satisfied: bool
    tolerance: float
    components: dict

    def to_dict(self) -> dict:
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "gap": self.gap,
            "satisfied": self.satisfied,
            "tolerance": self.tolerance,
            "components": dict(self.components),
        }


def check_monogamy(state: StateVector, config: RoofConfig | None = None,
                   tolerance: float = DEFAULT_MONOGAMY_TOL) -> MonogamyReport:
    """Test tau4^2 (first qubit traced) + tau3^2(rho_BCD) <= tau3^2 merged.

    The left side uses a lower-biased tau4 and an upper-biased tau3 from the
    same roof pair, so a violation beyond tolerance is a genuine red flag
    rather than noise in a known direction.
    """
    if tuple(state.dims) != (2, 2, 2, 2):
        raise ValueError(f"monogamy check requires four qubits, got {state.dims}")
    rho_bcd = partial_trace(state, keep=[1, 2, 3])
    lo, hi = roof_pair(rho_bcd, config)
    tau4_sq = max(0.0, hi.value ** 2 - lo.value ** 2)
    lhs = tau4_sq + lo.value ** 2
    merged = tau3_merged_AB(state)
    rhs = merged ** 2
    gap = rhs - lhs
    return MonogamyReport(
        lhs=lhs,
        rhs=rhs,
        gap=gap,
        satisfied=bool(lhs <= rhs + tolerance),
        tolerance=tolerance,
        components={
            "tau4_traced_first": math.sqrt(tau4_sq),
            "tau3_bcd": lo.value,
            "tau_a_bcd": hi.value,
            "tau3_merged": merged,
        },
    )


@dataclass(frozen=True)
class Pure3Report:
    tau3_direct: float
    tau3_via_concurrence: float
    deviation: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "tau3_direct": self.tau3_direct,
            "tau3_via_concurrence": self.tau3_via_concurrence,
            "deviation": self.deviation,
            "passed": self.passed,
        }


def check_pure3_relation(state: StateVector,
                         tolerance: float = PURE3_TOL) -> Pure3Report:
    """Consistency of tau3 with sqrt(C_a^2 - C^2) of the last two qubits.

    Both sides are closed forms on a pure three-qubit state, so agreement is
    expected at full numerical precision; this ties the polynomial invariant
    and the spin-flip spectrum together.
    """
    if tuple(state.dims) != (2, 2, 2):
        raise ValueError(f"pure-state relation requires three qubits, got {state.dims}")
    direct = tau3_pure(state).value
    rho_cd = partial_trace(state, keep=[1, 2])
    ca = concurrence_assist_2q(rho_cd).value
    c = concurrence_mixed_2q(rho_cd).value
    via = math.sqrt(max(0.0, ca * ca - c * c))
    deviation = abs(direct - via)
    return Pure3Report(direct, via, deviation, bool(deviation <= tolerance))
