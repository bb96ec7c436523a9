"""Verification records, family sweeps, pseudopure checks, serialization."""

import numpy as np
import pytest

from qcomplement.core import PureState
from qcomplement.harness import (
    ComplementarityRecord,
    SweepSpec,
    family_sweep,
    pseudopure_check,
    records_csv,
    summarize,
    verify_equality,
    verify_inequality,
)
from qcomplement.states import StateClassTag, ghz_state, random_pure_state

PHASE_POINTS = 36


class TestComplementarityRecord:
    def test_rejects_out_of_range_quantifier(self):
        with pytest.raises(ValueError, match="outside"):
            ComplementarityRecord("x", 1.5, 0, 0, 1, 0, 0, 0)

    def test_rejects_negative_residual(self):
        with pytest.raises(ValueError, match="nonnegative"):
            ComplementarityRecord("x", 0, 0, 0, 1, 0, -0.1, 0)

    def test_rejects_inconsistent_character(self):
        # S^2 must equal V_single^2 + P^2.
        with pytest.raises(ValueError, match="S"):
            ComplementarityRecord("x", 0, 0.6, 0.8, 0.5, 0, 0, 0)

    def test_accepts_consistent_record(self):
        # S = 0.8 with P = 0.6 requires V_single = sqrt(0.28).
        ComplementarityRecord("x", 0.6, 0.6, 0.52915026221291817, 0.8,
                              0.6, 0.0, 0.0)


class TestSweepSpec:
    def test_rejects_empty_grid(self):
        with pytest.raises(ValueError, match="nonempty"):
            SweepSpec(family=StateClassTag.GHZ, values=())

    def test_rejects_bad_parameter(self):
        with pytest.raises(ValueError, match="invalid parameter"):
            SweepSpec(family=StateClassTag.GHZ, parameter="beta")

    def test_rejects_bad_fixed_key(self):
        with pytest.raises(ValueError, match="invalid parameter"):
            SweepSpec(family=StateClassTag.W, fixed={"gamma": 1.0})

    def test_rejects_bad_basis_source(self):
        with pytest.raises(ValueError, match="basis_source"):
            SweepSpec(family=StateClassTag.GHZ, basis_source="guess")


class TestVerifyEquality:
    def test_maximally_entangled_ghz(self):
        r = verify_equality(ghz_state(np.pi / 2), PHASE_POINTS)
        assert abs(r.c - 1.0) < 1e-12
        assert r.s < 1e-12
        assert r.residual_equality < 1e-6

    def test_product_state(self):
        r = verify_equality(PureState(np.eye(8)[0], 3), PHASE_POINTS)
        assert r.c == 0.0 and abs(r.s - 1.0) < 1e-12
        assert r.residual_equality < 1e-9

    def test_random_state(self):
        r = verify_equality(random_pure_state(42), PHASE_POINTS, "seed=42")
        assert r.residual_equality < 1e-6
        assert r.descriptor == "seed=42"


class TestVerifyInequality:
    def test_support_aligned_reduces_to_equality(self):
        r = verify_inequality(ghz_state(np.pi / 3),
                              [np.sqrt(0.5), np.sqrt(0.5), 0, 0], PHASE_POINTS)
        assert abs(r.slack_inequality) < 1e-6

    def test_kernel_direction_has_positive_slack(self):
        r = verify_inequality(ghz_state(np.pi / 2), [0, 0, 1, 0], PHASE_POINTS)
        assert r.slack_inequality > 0.1

    @pytest.mark.parametrize("seed", range(10))
    def test_slack_never_negative(self, seed):
        rng = np.random.default_rng(seed)
        coeffs = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        coeffs /= np.linalg.norm(coeffs)
        r = verify_inequality(random_pure_state(seed), coeffs, PHASE_POINTS)
        assert r.slack_inequality >= -1e-8


class TestFamilySweep:
    def test_ghz_closed_forms(self):
        values = np.linspace(0, np.pi, 9)
        recs = family_sweep(SweepSpec(family=StateClassTag.GHZ, values=values,
                                      phase_points=PHASE_POINTS))
        for rec, a1 in zip(recs, values):
            assert abs(rec.v2 - abs(np.sin(a1))) < 1e-6
            assert abs(rec.s - abs(np.cos(a1))) < 1e-9
            assert rec.v_single < 1e-9
            assert rec.residual_equality < 1e-6

    def test_w_family_circle(self):
        values = np.linspace(0, np.pi, 9)
        recs = family_sweep(SweepSpec(family=StateClassTag.W, values=values,
                                      fixed={"alpha2_0": np.pi / 2},
                                      phase_points=PHASE_POINTS))
        for rec, a1 in zip(recs, values):
            assert rec.residual_equality < 1e-6
            assert rec.v_single < 1e-9
            assert abs(rec.s - abs(np.cos(a1))) < 1e-9

    def test_intermediate_family_circle(self):
        recs = family_sweep(SweepSpec(
            family=StateClassTag.INTERMEDIATE, values=np.linspace(0, np.pi, 9),
            fixed={"alpha2_0": np.pi / 3, "alpha3_00": np.pi / 4},
            phase_points=PHASE_POINTS))
        assert max(r.residual_equality for r in recs) < 1e-6

    def test_table_and_eigensolve_routes_agree(self):
        spec_kwargs = dict(family=StateClassTag.INTERMEDIATE,
                           values=np.linspace(0.3, 2.8, 5),
                           fixed={"alpha2_0": 0.9, "alpha3_00": 1.3},
                           phase_points=PHASE_POINTS)
        table = family_sweep(SweepSpec(basis_source="table", **spec_kwargs))
        eigen = family_sweep(SweepSpec(basis_source="eigensolve", **spec_kwargs))
        for a, b in zip(table, eigen):
            assert abs(a.v2 - b.v2) < 1e-6


class TestPseudopure:
    @pytest.mark.parametrize("eps", [1e-5, 0.3, 1.0])
    def test_rescaled_interferogram_matches_pure(self, eps):
        report = pseudopure_check(random_pure_state(5), eps,
                                  phase_points=PHASE_POINTS)
        assert report.max_joint_deviation < 1e-9
        assert report.max_corrected_deviation < 1e-9
        assert report.passed


class TestSerialization:
    def _records(self):
        return [verify_equality(random_pure_state(s), PHASE_POINTS, f"seed={s}")
                for s in range(3)]

    def test_csv_is_deterministic(self):
        assert records_csv(self._records()) == records_csv(self._records())

    def test_csv_shape(self):
        text = records_csv(self._records())
        lines = text.strip().split("\n")
        assert lines[0].startswith("#")
        assert lines[1].split(",")[0] == "descriptor"
        assert len(lines) == 2 + 3
        assert len(lines[2].split(",")) == 8

    def test_summarize_equality(self):
        summary = summarize(self._records(), 1e-6, "equality")
        assert summary["pass"] and summary["n_states"] == 3
        assert summary["max_residual"] < 1e-6

    def test_summarize_fails_on_tight_tolerance(self):
        summary = summarize(self._records(), 1e-18, "equality")
        assert not summary["pass"]

    def test_summarize_inequality_ignores_residual(self):
        rec = verify_inequality(ghz_state(np.pi / 2), [0, 0, 1, 0],
                                PHASE_POINTS)
        assert summarize([rec], 1e-6, "inequality")["pass"]
        assert not summarize([rec], 1e-6, "equality")["pass"]

    def test_summarize_rejects_unknown_check(self):
        with pytest.raises(ValueError):
            summarize([], 1e-6, "both")
