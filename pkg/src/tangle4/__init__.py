"""Localized quadripartite entanglement toolkit.

Computes the tau4 monotone of four-party pure states (the extra 3-tangle a
measurement on one subsystem can unlock), the convex-roof and assistance
3-tangles it is built from, the closed-form pure-state measures, the nine
SLOCC standard families with their zero/nonzero predictions, and the
merged-party monogamy inequality.
"""

from .convexroof import (
    RoofConfig,
    RoofResult,
    ensemble_from_unitary,
    grid_oracle,
    optimize_roof,
    roof_pair,
    tau3_mixed,
    tau_a,
    unitary_from_params,
)
from .families import (
    FAMILY_IDS,
    FamilySpec,
    Prediction,
    family_state,
    paper_points,
    predicted_zero,
    sweep,
    sweep_paper_points,
)
from .measures import (
    MeasureValue,
    concurrence_assist_2q,
    concurrence_mixed_2q,
    mu3_pure,
    n_tangle_4q,
    tau3_pure,
)
from .monogamy import (
    MonogamyReport,
    check_monogamy,
    check_pure3_relation,
    tau3_merged_AB,
)
from .qstate import (
    DensityMatrix,
    Ensemble,
    LocalOperator,
    StateVector,
    ZeroStateError,
    apply_local,
    eigendecompose,
    load_state,
    normalize,
    partial_trace,
    random_invertible_local,
    random_kraus_set,
    random_pure,
    random_separable_4q,
    save_state,
)
from .tau4 import (
    EntanglementVector,
    SloccProtocol,
    Tau4Report,
    certify_nonzero,
    check_concavity,
    check_monotonicity,
    entanglement_vector,
    slocc_round,
    tau4_of_dm,
    tau4_pure4,
)

__version__ = "0.1.0"
