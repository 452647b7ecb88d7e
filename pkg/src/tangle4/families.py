"""Standard representatives of the nine SLOCC families of four qubits.

Each family has a parametrized standard state; any four-qubit pure state
converts into one of them under invertible local operations. The module
generates the standard states, encodes the known zero/nonzero conditions
for the localized entanglement when the first qubit is traced, and sweeps
parameter grids against those predictions.
"""

from __future__ import annotations

import io
import csv
import math
from dataclasses import dataclass

import numpy as np

from .convexroof import RoofConfig
from .qstate import StateVector, ZeroStateError, normalize
from .tau4 import DEFAULT_NONZERO_MARGIN, Tau4Report, tau4_pure4

FAMILY_IDS = (
    "Gabcd", "Labc2", "La2b2", "Lab3", "La4",
    "La2_03plus1", "L05plus3bar", "L07plus1bar", "L03_03",
)

MODULUS_ATOL = 1e-9
ZERO_TOL = 2e-3


@dataclass(frozen=True)
class FamilySpec:
    family_id: str
    a: complex = 0j
    b: complex = 0j
    c: complex = 0j
    d: complex = 0j

    def __post_init__(self):
        if self.family_id not in FAMILY_IDS:
            raise ValueError(f"unknown family {self.family_id!r}")
        for name in "abcd":
            object.__setattr__(self, name, complex(getattr(self, name)))

    def params(self) -> tuple[complex, complex, complex, complex]:
        return (self.a, self.b, self.c, self.d)


@dataclass(frozen=True)
class Prediction:
    family_id: str
    condition: str
    expected: str  # "zero" | "nonzero" | "unspecified"
    traced_site: int = 0


def family_amplitudes(spec: FamilySpec) -> np.ndarray:
    """Unnormalized amplitude pattern of the standard state, big-endian."""
    a, b, c, d = spec.params()
    amps = np.zeros(16, dtype=complex)
    fid = spec.family_id
    if fid == "Gabcd":
        amps[0b0000] = amps[0b1111] = (a + d) / 2
        amps[0b0011] = amps[0b1100] = (a - d) / 2
        amps[0b0101] = amps[0b1010] = (b + c) / 2
        amps[0b0110] = amps[0b1001] = (b - c) / 2
    elif fid == "Labc2":
        amps[0b0000] = amps[0b1111] = (a + b) / 2
        amps[0b0011] = amps[0b1100] = (a - b) / 2
        amps[0b0101] = amps[0b1010] = c
        amps[0b0110] = 1.0
    elif fid == "La2b2":
        amps[0b0000] = amps[0b1111] = a
        amps[0b0101] = amps[0b1010] = b
        amps[0b0110] = 1.0
        amps[0b0011] = 1.0
    elif fid == "Lab3":
        amps[0b0000] = amps[0b1111] = a
        amps[0b0101] = amps[0b1010] = (a + b) / 2
        amps[0b0110] = amps[0b1001] = (a - b) / 2
        w = 1j / math.sqrt(2)
        amps[0b0001] = amps[0b0010] = amps[0b0111] = amps[0b1011] = w
    elif fid == "La4":
        amps[0b0000] = amps[0b0101] = amps[0b1010] = amps[0b1111] = a
        amps[0b0001] = 1j
        amps[0b0110] = 1.0
        amps[0b1011] = -1.0
    elif fid == "La2_03plus1":
        amps[0b0000] = amps[0b1111] = a
        amps[0b0011] = amps[0b0101] = amps[0b0110] = 1.0
    elif fid == "L05plus3bar":
        amps[0b0000] = amps[0b0101] = amps[0b1000] = amps[0b1110] = 1.0
    elif fid == "L07plus1bar":
        amps[0b0000] = amps[0b1011] = amps[0b1101] = amps[0b1110] = 1.0
    elif fid == "L03_03":
        amps[0b0000] = amps[0b0111] = 1.0
    return amps


def family_state(spec: FamilySpec) -> StateVector:
    """Normalized standard state of the family at the given parameters."""
    amps = family_amplitudes(spec)
    if np.linalg.norm(amps) < 1e-12:
        raise ZeroStateError(
            f"parameters {spec.params()} give the zero vector for {spec.family_id}"
        )
    return normalize(StateVector((2, 2, 2, 2), amps))


def _close(x: float, y: float) -> bool:
    return abs(x - y) <= MODULUS_ATOL


def _sq_equal(x: complex, y: complex) -> bool:
    # equality of squares: equal moduli AND aligned phases (x = +/- y up to
    # nothing else). Equal moduli alone is not enough for the parameter
    # families whose zero set this encodes; a relative i-phase at equal
    # moduli provably carries nonzero localized entanglement.
    return abs(x * x - y * y) <= MODULUS_ATOL


def predicted_zero(spec: FamilySpec) -> Prediction:
    """Known zero/nonzero character of tau4 when the first qubit is traced.

    Only the stated conditions are encoded; everything else is reported as
    unspecified rather than guessed. The parameter-equality conditions for
    Gabcd, Labc2 and La2b2 compare squares, the regime where the published
    zero claims (and their separability rationale) actually hold; Lab3 is
    insensitive to the relative phase and compares moduli.
    """
    fid = spec.family_id
    a, b, c, d = spec.params()
    moduli = [abs(p) for p in spec.params()]

    def pred(condition, expected):
        return Prediction(fid, condition, expected)

    if fid == "Gabcd":
        if (all(_sq_equal(p, a) for p in (b, c, d)) and moduli[0] > MODULUS_ATOL):
            return pred("a^2=b^2=c^2=d^2", "zero")
        vanishing = sum(1 for m in moduli if m <= MODULUS_ATOL)
        if vanishing == 3:
            return pred("three parameters vanish", "zero")
    elif fid == "Labc2":
        if _sq_equal(a, c):
            return pred("a^2=c^2", "zero")
        if _sq_equal(b, c):
            return pred("b^2=c^2", "zero")
    elif fid == "La2b2":
        if _sq_equal(a, b):
            return pred("a^2=b^2", "zero")
    elif fid == "Lab3":
        if _close(moduli[0], moduli[1]):
            return pred("|a|=|b|", "zero")
    elif fid == "La4":
        if moduli[0] <= MODULUS_ATOL:
            return pred("a=0", "zero")
    elif fid == "La2_03plus1":
        if moduli[0] <= MODULUS_ATOL:
            return pred("a=0", "zero")
    elif fid == "L05plus3bar":
        return pred("always", "zero")
    elif fid == "L07plus1bar":
        return pred("always", "nonzero")
    elif fid == "L03_03":
        return pred("always", "zero")
    return pred("outside stated conditions", "unspecified")


@dataclass(frozen=True)
class SweepRow:
    spec: FamilySpec
    prediction: Prediction
    tau4: float | None
    certified_lower: float | None
    gap: float | None
    agree: bool | None
    note: str = ""

    def to_dict(self) -> dict:
        def cpx(z):
            return [z.real, z.imag]

        return {
            "family": self.spec.family_id,
            "a": cpx(self.spec.a),
            "b": cpx(self.spec.b),
            "c": cpx(self.spec.c),
            "d": cpx(self.spec.d),
            "tau4": self.tau4,
            "certified_lower": self.certified_lower,
            "gap": self.gap,
            "prediction": self.prediction.expected,
            "condition": self.prediction.condition,
            "agree": self.agree,
            "note": self.note,
        }


def _row_from_report(spec: FamilySpec, prediction: Prediction, report: Tau4Report,
                     zero_tol: float, margin: float) -> SweepRow:
    gap = report.tau_a.value - report.tau3.value
    if prediction.expected == "zero":
        agree = report.tau4 <= zero_tol
    elif prediction.expected == "nonzero":
        agree = gap > margin
    else:
        agree = None
    return SweepRow(
        spec=spec,
        prediction=prediction,
        tau4=report.tau4,
        certified_lower=report.certified_lower,
        gap=gap,
        agree=agree,
    )


def sweep(family_id: str, param_grid, config: RoofConfig | None = None,
          zero_tol: float = ZERO_TOL,
          margin: float = DEFAULT_NONZERO_MARGIN) -> list[SweepRow]:
    """Evaluate tau4 (first qubit traced) over a parameter grid.

    ``param_grid`` is an iterable of (a, b, c, d) tuples; shorter tuples are
    padded with zeros. Zero-norm points are kept in the table with a note
    instead of a value.
    """
    rows = []
    for point in param_grid:
        padded = tuple(point) + (0j,) * (4 - len(tuple(point)))
        spec = FamilySpec(family_id, *padded)
        prediction = predicted_zero(spec)
        try:
            state = family_state(spec)
        except ZeroStateError:
            rows.append(SweepRow(spec, prediction, None, None, None, None,
                                 note="zero-norm point skipped"))
            continue
        report = tau4_pure4(state, prediction.traced_site, config)
        rows.append(_row_from_report(spec, prediction, report, zero_tol, margin))
    return rows


def paper_points(family_id: str | None = None) -> list[FamilySpec]:
    """Parameter points exercising every stated zero/nonzero condition.

    Conditions with free parameters are sampled at two distinct points,
    including one with nontrivial phases; point conditions (a single state)
    appear once.
    """
    y = 0.8 * np.exp(1j * np.pi / 5)
    table = {
        "Gabcd": [
            (1, 1, 1, 1), (y, -y, y, -y),                # equal squares
            (1, 0, 0, 0), (0, 0, 0.5j, 0),               # three vanish
        ],
        "Labc2": [
            (1, 0.5, 1), (0.6j, 0.3, -0.6j),             # a^2=c^2
            (1, 0.5, 0.5), (0.8, -0.4, 0.4),             # b^2=c^2
        ],
        "La2b2": [(1, 1), (0.7j, -0.7j)],
        "Lab3": [(1, 1), (0.5, 0.5 * np.exp(1.1j)), (0, 0)],
        "La4": [(0,)],
        "La2_03plus1": [(0,)],
        "L05plus3bar": [()],
        "L07plus1bar": [()],
        "L03_03": [()],
    }
    wanted = [family_id] if family_id else list(FAMILY_IDS)
    specs = []
    for fid in wanted:
        for point in table[fid]:
            padded = tuple(complex(p) for p in point) + (0j,) * (4 - len(point))
            specs.append(FamilySpec(fid, *padded))
    return specs


def sweep_paper_points(config: RoofConfig | None = None,
                       zero_tol: float = ZERO_TOL,
                       margin: float = DEFAULT_NONZERO_MARGIN) -> list[SweepRow]:
    """Run every paper point of every family against its prediction."""
    rows = []
    for spec in paper_points():
        rows.extend(sweep(spec.family_id, [spec.params()], config, zero_tol, margin))
    return rows


def _fmt_complex(z: complex) -> str:
    return f"{z.real:.12g}{z.imag:+.12g}j"


def rows_to_csv(rows: list[SweepRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["family", "a", "b", "c", "d", "tau4", "certified_lower",
                     "prediction", "agree"])
    for row in rows:
        writer.writerow([
            row.spec.family_id,
            _fmt_complex(row.spec.a), _fmt_complex(row.spec.b),
            _fmt_complex(row.spec.c), _fmt_complex(row.spec.d),
            "" if row.tau4 is None else f"{row.tau4:.12g}",
            "" if row.certified_lower is None else f"{row.certified_lower:.12g}",
            row.prediction.expected,
            "" if row.agree is None else str(row.agree).lower(),
        ])
    return buf.getvalue()
