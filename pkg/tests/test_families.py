import math

import numpy as np
import pytest

from tangle4 import (
    FAMILY_IDS,
    FamilySpec,
    RoofConfig,
    ZeroStateError,
    family_state,
    paper_points,
    predicted_zero,
    sweep,
)
from tangle4.families import family_amplitudes, rows_to_csv

from helpers import ghz, w_state

FAST = RoofConfig(restarts=4, max_iterations=500)


def amp_map(amps):
    return {i: amps[i] for i in range(16) if abs(amps[i]) > 1e-14}


class TestStandardStates:
    """Golden amplitude patterns, frozen coefficient-by-coefficient."""

    def test_gabcd_pattern(self):
        a, b, c, d = 0.9, 0.4j, -0.2, 0.7
        amps = family_amplitudes(FamilySpec("Gabcd", a, b, c, d))
        assert amp_map(amps) == {
            0b0000: (a + d) / 2, 0b1111: (a + d) / 2,
            0b0011: (a - d) / 2, 0b1100: (a - d) / 2,
            0b0101: (b + c) / 2, 0b1010: (b + c) / 2,
            0b0110: (b - c) / 2, 0b1001: (b - c) / 2,
        }

    def test_labc2_pattern(self):
        a, b, c = 0.8, 0.3, 0.5j
        amps = family_amplitudes(FamilySpec("Labc2", a, b, c))
        assert amp_map(amps) == {
            0b0000: (a + b) / 2, 0b1111: (a + b) / 2,
            0b0011: (a - b) / 2, 0b1100: (a - b) / 2,
            0b0101: c, 0b1010: c,
            0b0110: 1.0,
        }

    def test_la2b2_pattern(self):
        a, b = 0.6, 0.25
        amps = family_amplitudes(FamilySpec("La2b2", a, b))
        assert amp_map(amps) == {
            0b0000: a, 0b1111: a,
            0b0101: b, 0b1010: b,
            0b0110: 1.0, 0b0011: 1.0,
        }

    def test_lab3_pattern_includes_imaginary_block(self):
        a, b = 0.7, 0.2
        amps = family_amplitudes(FamilySpec("Lab3", a, b))
        w = 1j / math.sqrt(2)
        assert amp_map(amps) == {
            0b0000: a, 0b1111: a,
            0b0101: (a + b) / 2, 0b1010: (a + b) / 2,
            0b0110: (a - b) / 2, 0b1001: (a - b) / 2,
            0b0001: w, 0b0010: w, 0b0111: w, 0b1011: w,
        }

    def test_la4_pattern(self):
        a = 0.5
        amps = family_amplitudes(FamilySpec("La4", a))
        assert amp_map(amps) == {
            0b0000: a, 0b0101: a, 0b1010: a, 0b1111: a,
            0b0001: 1j, 0b0110: 1.0, 0b1011: -1.0,
        }

    def test_la2_03plus1_pattern(self):
        a = 0.4
        amps = family_amplitudes(FamilySpec("La2_03plus1", a))
        assert amp_map(amps) == {
            0b0000: a, 0b1111: a,
            0b0011: 1.0, 0b0101: 1.0, 0b0110: 1.0,
        }

    def test_parameterless_patterns(self):
        assert amp_map(family_amplitudes(FamilySpec("L05plus3bar"))) == {
            0b0000: 1.0, 0b0101: 1.0, 0b1000: 1.0, 0b1110: 1.0,
        }
        assert amp_map(family_amplitudes(FamilySpec("L07plus1bar"))) == {
            0b0000: 1.0, 0b1011: 1.0, 0b1101: 1.0, 0b1110: 1.0,
        }
        assert amp_map(family_amplitudes(FamilySpec("L03_03"))) == {
            0b0000: 1.0, 0b0111: 1.0,
        }

    def test_states_normalized(self):
        for spec in paper_points():
            try:
                state = family_state(spec)
            except ZeroStateError:
                continue
            assert abs(state.norm() - 1.0) < 1e-12

    def test_ghz4_is_gabcd_point(self):
        state = family_state(FamilySpec("Gabcd", 1, 0, 0, 1))
        np.testing.assert_allclose(state.amps, ghz(4).amps, atol=1e-12)

    def test_l03_03_normalized_form(self):
        state = family_state(FamilySpec("L03_03"))
        expected = np.zeros(16)
        expected[0b0000] = expected[0b0111] = 2 ** -0.5
        np.testing.assert_allclose(state.amps, expected, atol=1e-12)

    def test_lab3_w_class_point_support(self):
        # a = b = 0 leaves the four imaginary terms only
        amps = family_amplitudes(FamilySpec("Lab3", 0, 0))
        assert set(amp_map(amps)) == {0b0001, 0b0010, 0b0111, 0b1011}

    def test_zero_norm_rejected(self):
        with pytest.raises(ZeroStateError):
            family_state(FamilySpec("Gabcd", 0, 0, 0, 0))

    def test_unknown_family_rejected(self):
        with pytest.raises(ValueError):
            FamilySpec("nope", 1)


class TestPredictions:
    def test_gabcd_equal_parameters_zero(self):
        assert predicted_zero(FamilySpec("Gabcd", 1, 1, 1, 1)).expected == "zero"

    def test_gabcd_sign_orbit_zero(self):
        assert predicted_zero(FamilySpec("Gabcd", 1, -1, 1, -1)).expected == "zero"

    def test_gabcd_equal_moduli_wrong_phase_unspecified(self):
        spec = FamilySpec("Gabcd", 0.8, 0.8j, -0.8, -0.8j)
        assert predicted_zero(spec).expected == "unspecified"

    def test_gabcd_three_vanishing(self):
        assert predicted_zero(FamilySpec("Gabcd", 0, 0, 0.5j, 0)).expected == "zero"

    def test_labc2_conditions(self):
        assert predicted_zero(FamilySpec("Labc2", 1, 0.5, 1)).expected == "zero"
        assert predicted_zero(FamilySpec("Labc2", 1, 0.5, 0.5)).expected == "zero"
        assert predicted_zero(FamilySpec("Labc2", 1, 0.5, 0.3)).expected == "unspecified"

    def test_la2b2_conditions(self):
        assert predicted_zero(FamilySpec("La2b2", 1, -1)).expected == "zero"
        assert predicted_zero(FamilySpec("La2b2", 1, 0.5)).expected == "unspecified"
        assert predicted_zero(FamilySpec("La2b2", 1, 1j)).expected == "unspecified"

    def test_lab3_modulus_condition(self):
        phase = np.exp(0.7j)
        assert predicted_zero(FamilySpec("Lab3", 0.5, 0.5 * phase)).expected == "zero"
        assert predicted_zero(FamilySpec("Lab3", 0.5, 0.4)).expected == "unspecified"

    def test_point_conditions(self):
        assert predicted_zero(FamilySpec("La4", 0)).expected == "zero"
        assert predicted_zero(FamilySpec("La4", 0.3)).expected == "unspecified"
        assert predicted_zero(FamilySpec("La2_03plus1", 0)).expected == "zero"

    def test_parameterless_families(self):
        assert predicted_zero(FamilySpec("L05plus3bar")).expected == "zero"
        assert predicted_zero(FamilySpec("L07plus1bar")).expected == "nonzero"
        assert predicted_zero(FamilySpec("L03_03")).expected == "zero"

    def test_traced_site_fixed_to_first(self):
        assert predicted_zero(FamilySpec("L03_03")).traced_site == 0


class TestSweep:
    def test_zero_prediction_point(self):
        rows = sweep("Labc2", [(1, 0.5, 1)], FAST)
        assert len(rows) == 1
        assert rows[0].prediction.expected == "zero"
        assert rows[0].tau4 <= 2e-3
        assert rows[0].agree is True

    def test_nonzero_prediction_point(self):
        rows = sweep("L07plus1bar", [()], FAST)
        assert rows[0].agree is True
        assert rows[0].gap > 5e-2

    def test_unspecified_points_not_counted(self):
        rows = sweep("Gabcd", [(0.5, 0, 0, 0.8)], FAST)
        assert rows[0].agree is None

    def test_zero_norm_point_noted(self):
        rows = sweep("Gabcd", [(0, 0, 0, 0)], FAST)
        assert rows[0].tau4 is None
        assert "zero-norm" in rows[0].note

    def test_w4_and_family_point_both_vanish(self):
        # the quadripartite W state and the a=b=0 family point are different
        # vectors in the same class; each must vanish on its own
        from tangle4 import tau4_pure4

        assert tau4_pure4(w_state(4), 0, FAST).tau4 <= 2e-3
        rows = sweep("Lab3", [(0, 0)], FAST)
        assert rows[0].tau4 <= 2e-3

    def test_csv_output(self):
        rows = sweep("L03_03", [()], FAST)
        text = rows_to_csv(rows)
        lines = text.strip().splitlines()
        assert lines[0].startswith("family,a,b,c,d,tau4")
        assert lines[1].startswith("L03_03,")
        assert len(lines) == 2

    def test_diagonal_grid_is_unspecified_away_from_conditions(self):
        # a = d in (0, 1] with b = c = 0 sits outside every stated condition;
        # estimates are still reported for each grid point
        grid = [(x, 0, 0, x) for x in (0.25, 0.5, 1.0)]
        rows = sweep("Gabcd", grid, FAST)
        assert all(r.prediction.expected == "unspecified" for r in rows)
        assert all(r.agree is None for r in rows)
        assert all(r.tau4 is not None for r in rows)
        # the a = d = 1 point is the GHZ state: maximal localized entanglement
        assert rows[-1].tau4 > 0.99


class TestPaperPoints:
    def test_every_family_covered(self):
        fams = {s.family_id for s in paper_points()}
        assert fams == set(FAMILY_IDS)

    def test_conditions_sampled_twice_where_free(self):
        specs = paper_points("Labc2")
        conditions = [predicted_zero(s).condition for s in specs]
        assert conditions.count("a^2=c^2") == 2
        assert conditions.count("b^2=c^2") == 2

    def test_all_points_predict(self):
        for spec in paper_points():
            assert predicted_zero(spec).expected in ("zero", "nonzero")
