"""
Tests for ensembles, sweeps, scaling analysis and derived experiments

Tests cover:
1. Ensemble statistics and non-finite handling
2. Seeded realization streams and worker-count independence
3. Sweep grids, probe validation and peak location
4. Crossings and data collapse on synthetic curves
5. Quenched instability growth fits
6. Fidelity scaling and fluctuation exponents
7. Reduced-scale crossings, peaks and rare-region growth on real ensembles (slow)
"""

import math

import numpy as np
import pandas as pd
import pytest

from src.circuits.disorder import DisorderMode, DisorderSpec, MitigationSpec, NoiseField
from src.circuits.topology import Topology, TopologyKind
from src.errors import DegenerateFieldError, NonFiniteEnsembleError
from src.experiments.ensemble import (
    EnsembleRunner,
    RealizationStreams,
    disorder_average,
    summarize,
)
from src.experiments.fidelity import (
    FidelitySetting,
    fidelity_scaling,
    fit_fluctuation_exponent,
)
from src.experiments.instability import (
    draw_rare_region_field,
    fit_growth,
    instability_experiment,
)
from src.experiments.probes import (
    Engine,
    Probe,
    ReplicaRealization,
    check_probe,
    probe_pair,
)
from src.experiments.scaling import (
    CollapseSpec,
    Curve,
    curves_from_table,
    find_crossing,
    scaling_collapse,
    scan_collapse,
)
from src.experiments.sweep import (
    SweepSpec,
    locate_peak,
    peak_positions,
    results_table,
    sweep,
)


def _planted_field(row, depth: int, q1: float = 0.0, q2: float = 0.6) -> NoiseField:
    rates = np.repeat(np.asarray(row, dtype=float)[:, None], depth, axis=1)
    return NoiseField(rates=rates, quenched=True, q1=q1, q2=q2)


def _small_realization() -> ReplicaRealization:
    disorder = DisorderSpec.from_sigma_ratio(0.5, 0.1)
    return ReplicaRealization(
        topology=Topology(kind=TopologyKind.ALL_TO_ALL, n_qubits=4),
        depth=4,
        disorder=disorder,
        mitigation=MitigationSpec.zero_mean_field(disorder),
        probe=Probe.I_AB,
    )


# ============================================================================
# Ensemble statistics
# ============================================================================

class TestSummarize:
    """Mean, sample std and standard error over finite values."""

    def test_sample_statistics(self):
        result = summarize([1.0, 2.0, 3.0, 4.0], {"n": 4})
        assert result.mean == pytest.approx(2.5)
        assert result.std == pytest.approx(math.sqrt(5.0 / 3.0))
        assert result.stderr == pytest.approx(result.std / 2.0)
        assert result.count == 4
        assert result.to_dict()["n"] == 4

    def test_non_finite_values_are_counted(self):
        result = summarize([1.0, math.nan, math.inf, 3.0])
        assert result.mean == pytest.approx(2.0)
        assert result.count == 2
        assert result.non_finite_count == 2

    def test_all_non_finite_raises(self):
        with pytest.raises(NonFiniteEnsembleError):
            summarize([math.nan, -math.inf])

    def test_single_value(self):
        result = summarize([0.7])
        assert result.std == 0.0
        assert result.stderr == 0.0

    def test_compensated_sum(self):
        result = summarize([1e16, 1.0, -1e16, 1.0])
        assert result.mean == pytest.approx(0.5)


# ============================================================================
# Realization streams
# ============================================================================

class TestRealizationStreams:
    """Per-realization RNG keyed by (seed, tag, id)."""

    def test_same_key_same_stream(self):
        streams = RealizationStreams(11)
        assert streams.stream("a", 3).random() == streams.stream("a", 3).random()

    def test_tag_and_id_separate_streams(self):
        streams = RealizationStreams(11)
        base = streams.stream("a", 3).random()
        assert streams.stream("b", 3).random() != base
        assert streams.stream("a", 4).random() != base
        assert RealizationStreams(12).stream("a", 3).random() != base

    def test_invalid_runner_arguments(self):
        with pytest.raises(ValueError, match="workers"):
            EnsembleRunner(1, workers=0)
        with pytest.raises(ValueError, match="realizations"):
            EnsembleRunner(1).collect(_small_realization(), "tag", 0)

    def test_worker_count_does_not_change_results(self):
        observable = _small_realization()
        serial = EnsembleRunner(5, workers=1).collect(observable, "pool", 6)
        pooled = EnsembleRunner(5, workers=2).collect(observable, "pool", 6)
        assert serial == pooled

    def test_disorder_average_default_tag(self):
        observable = _small_realization()
        a = disorder_average(observable, 4, master_seed=9, key={"n": 4})
        b = disorder_average(observable, 4, master_seed=9, key={"n": 4})
        assert a.mean == b.mean
        assert a.key == {"n": 4}


# ============================================================================
# Sweeps
# ============================================================================

class TestSweep:
    """Grid evaluation, depth rule and probe validation."""

    def test_minimal_replica_sweep(self):
        spec = SweepSpec(
            engine=Engine.REPLICA,
            topology_kind=TopologyKind.ALL_TO_ALL,
            sizes=[4],
            sigma_ratios=[0.5],
            realizations=10,
            master_seed=1,
            probe=Probe.I_AB,
        )
        results = sweep(spec)
        assert len(results) == 1
        row = results[0].to_dict()
        assert row["count"] == 10
        assert row["depth"] == 4
        assert row["q_a"] == pytest.approx(spec.point_mitigation(spec.point_disorder(0.5)).q_a)

    def test_sweep_is_reproducible(self):
        spec = SweepSpec(
            engine=Engine.REPLICA,
            topology_kind=TopologyKind.ALL_TO_ALL,
            sizes=[4, 6],
            sigma_ratios=[0.0, 0.6],
            realizations=3,
            master_seed=2,
            probe=Probe.RENYI2,
        )
        first = results_table(sweep(spec))
        second = results_table(sweep(spec))
        pd.testing.assert_frame_equal(first, second)
        assert len(first) == 4

    def test_small_exact_sweep(self):
        spec = SweepSpec(
            engine=Engine.EXACT,
            topology_kind=TopologyKind.ALL_TO_ALL,
            sizes=[2],
            sigma_ratios=[0.5],
            realizations=3,
            master_seed=3,
            probe=Probe.MUTUAL_INFORMATION,
        )
        row = sweep(spec)[0].to_dict()
        assert row["count"] + row["non_finite_count"] == 3
        assert row["depth"] == 2

    def test_chain_defaults_to_quenched(self):
        spec = SweepSpec(
            engine=Engine.REPLICA,
            topology_kind=TopologyKind.CHAIN_1D_PERIODIC,
            sizes=[4],
            sigma_ratios=[0.5],
            realizations=1,
            master_seed=1,
            probe=Probe.I_AB,
        )
        assert spec.disorder_mode == DisorderMode.QUENCHED

    def test_fixed_depth_rule(self):
        spec = SweepSpec(
            engine=Engine.REPLICA,
            topology_kind=TopologyKind.ALL_TO_ALL,
            sizes=[4],
            sigma_ratios=[0.5],
            realizations=1,
            master_seed=1,
            probe=Probe.I_AB,
            depth_rule="fixed",
            depth=7,
        )
        assert spec.depth_for(4) == 7

    def test_probe_must_match_engine(self):
        with pytest.raises(ValueError, match="Invalid probe"):
            SweepSpec(
                engine=Engine.REPLICA,
                topology_kind=TopologyKind.ALL_TO_ALL,
                sizes=[4],
                sigma_ratios=[0.5],
                realizations=1,
                master_seed=1,
                probe=Probe.FIDELITIES,
            )
        with pytest.raises(ValueError):
            check_probe(Engine.EXACT, Probe.SIGN_TRACES)

    def test_exact_size_limit(self):
        with pytest.raises(ValueError, match="Exact engine"):
            SweepSpec(
                engine=Engine.EXACT,
                topology_kind=TopologyKind.ALL_TO_ALL,
                sizes=[14],
                sigma_ratios=[0.5],
                realizations=1,
                master_seed=1,
                probe=Probe.RENYI2,
            )

    def test_probe_pairs(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            a, b = probe_pair(TopologyKind.CHAIN_1D_PERIODIC, 10, rng)
            assert b == (a + 5) % 10
            a, b = probe_pair(TopologyKind.ALL_TO_ALL, 10, rng)
            assert a != b


class TestPeaks:
    """Parabolic refinement of curve maxima."""

    def test_interior_peak_is_refined(self):
        x = np.linspace(0.0, 4.0, 5)
        peak = locate_peak(x, -((x - 1.7) ** 2))
        assert peak.interior
        assert peak.x_peak == pytest.approx(1.7)
        assert peak.y_peak == pytest.approx(0.0, abs=1e-12)

    def test_endpoint_peak(self):
        peak = locate_peak([0.0, 1.0, 2.0], [1.0, 2.0, 3.0])
        assert not peak.interior
        assert peak.x_peak == 2.0

    def test_mismatched_lengths(self):
        with pytest.raises(ValueError):
            locate_peak([0.0, 1.0], [1.0])

    def test_peak_positions_per_size(self):
        x = np.linspace(0.0, 1.0, 11)
        table = pd.DataFrame(
            [{"n": n, "sigma_ratio": v, "mean": -((v - c) ** 2)} for n, c in [(4, 0.3), (8, 0.6)] for v in x]
        )
        peaks = peak_positions(table)
        assert list(peaks["n"]) == [4, 8]
        assert list(peaks["x_peak"]) == pytest.approx([0.3, 0.6])


# ============================================================================
# Finite-size scaling
# ============================================================================

class TestCrossing:
    """Pairwise crossings of synthetic curves."""

    def test_common_crossing(self):
        x = np.array([0.0, 0.2, 0.4, 0.6, 0.8])
        curves = [Curve(n=n, x=x, y=(x - 0.5) * n) for n in (4, 8, 16)]
        result = find_crossing(curves)
        assert result.found
        assert result.estimate == pytest.approx(0.5)
        assert result.uncertainty == pytest.approx(0.0, abs=1e-12)
        assert len(result.pairwise) == 3

    def test_no_crossing(self):
        x = np.linspace(0.0, 1.0, 5)
        result = find_crossing([Curve(n=n, x=x, y=x + n) for n in (4, 8)])
        assert not result.found
        assert math.isnan(result.estimate)

    def test_needs_two_sizes(self):
        with pytest.raises(ValueError):
            find_crossing([Curve(n=4, x=[0.0, 1.0], y=[0.0, 1.0])])

    def test_curves_from_table_sorts_x(self):
        table = pd.DataFrame({"n": [4, 4, 4], "sigma_ratio": [0.4, 0.0, 0.2], "mean": [3.0, 1.0, 2.0]})
        (curve,) = curves_from_table(table)
        assert list(curve.x) == [0.0, 0.2, 0.4]
        assert list(curve.y) == [1.0, 2.0, 3.0]


class TestCollapse:
    """Rescaling x -> (x - sigma_c) N^mu and its quality score."""

    @staticmethod
    def _scaled_curves(sigma_c: float = 0.3, mu: float = 0.5):
        x = np.linspace(0.0, 1.0, 21)
        return [Curve(n=n, x=x, y=(x - sigma_c) * n**mu) for n in (4, 16)]

    def test_exact_collapse_scores_zero(self):
        result = scaling_collapse(self._scaled_curves(), CollapseSpec(0.3, 0.5))
        assert result.quality == pytest.approx(0.0, abs=1e-20)
        assert set(result.table.columns) == {"n", "x_scaled", "y_scaled"}

    def test_wrong_parameters_score_worse(self):
        curves = self._scaled_curves()
        assert scaling_collapse(curves, CollapseSpec(0.4, 0.5)).quality > 1e-6

    def test_scan_finds_true_parameters(self):
        scan = scan_collapse(self._scaled_curves(), [0.2, 0.3, 0.4], [0.25, 0.5, 1.0])
        assert scan.best_sigma_c == pytest.approx(0.3)
        assert scan.best_mu == pytest.approx(0.5)
        assert len(scan.to_frame()) == 9

    def test_mu_must_be_positive(self):
        with pytest.raises(ValueError, match="mu"):
            CollapseSpec(0.3, 0.0)


# ============================================================================
# Quenched instability
# ============================================================================

class TestInstability:
    """Growth of log Tr rho_2^+ from a long low-noise domain."""

    def test_fit_growth_linear(self):
        log_traces = 1.0 + 0.5 * np.arange(11)
        fit = fit_growth(log_traces, 5, 10)
        assert fit.slope == pytest.approx(0.5)
        assert fit.r2 == pytest.approx(1.0)

    def test_fit_growth_flat(self):
        fit = fit_growth(np.zeros(6), 2, 5)
        assert fit.slope == 0.0

    def test_fit_window_validated(self):
        with pytest.raises(ValueError, match="fit window"):
            fit_growth(np.zeros(5), 3, 5)

    def test_planted_domain_grows(self):
        disorder = DisorderSpec(p=0.5, q1=0.0, q2=0.6, mode=DisorderMode.QUENCHED)
        field = _planted_field([0.0] * 6 + [0.6] * 4, 30)
        fit = instability_experiment(10, disorder, 30, field=field)
        assert fit.slope > 0
        assert (fit.run_start, fit.run_length) == (0, 6)
        assert fit.imry_ma_ratio > 1.0
        assert len(fit.log_traces) == 31

    def test_no_disorder_no_growth(self):
        disorder = DisorderSpec(p=0.5, q1=0.1, q2=0.1, mode=DisorderMode.QUENCHED)
        fit = instability_experiment(6, disorder, 10, rng=np.random.default_rng(0))
        assert fit.slope == pytest.approx(0.0, abs=1e-10)

    def test_field_without_low_noise_site(self):
        disorder = DisorderSpec(p=0.5, q1=0.0, q2=0.6, mode=DisorderMode.QUENCHED)
        with pytest.raises(DegenerateFieldError):
            instability_experiment(6, disorder, 4, field=_planted_field([0.6] * 6, 4))

    def test_requires_quenched_disorder(self):
        with pytest.raises(ValueError, match="quenched"):
            instability_experiment(6, DisorderSpec(p=0.5, q1=0.0, q2=0.6), 4)


# ============================================================================
# Fidelity scaling
# ============================================================================

class TestFidelity:
    """Mitigated fidelity and XEB tables."""

    def test_perfect_mitigation_keeps_fidelity(self):
        settings = [FidelitySetting(label="uniform", sigma_ratio=0.0)]
        table = fidelity_scaling([2], [1, 2], settings, 3, EnsembleRunner(4))
        assert len(table) == 2
        assert list(table["count"]) == [3, 3]
        assert table["neg_log_F_M_per_n_mean"].to_numpy() == pytest.approx([0.0, 0.0], abs=1e-9)

    def test_unmitigated_setting_loses_fidelity(self):
        settings = [FidelitySetting(label="bare", sigma_ratio=0.0, mitigated=False)]
        table = fidelity_scaling([2], [3], settings, 2, EnsembleRunner(4))
        assert table["neg_log_F_M_per_n_mean"].iloc[0] > 0

    def test_fluctuation_exponent(self):
        depths = np.array([2, 4, 8, 16])
        table = pd.DataFrame(
            {"setting": "a", "n": 4, "depth": depths, "log_F_M_std": 2.0 * depths**0.5}
        )
        (fit,) = fit_fluctuation_exponent(table)
        assert fit.beta == pytest.approx(0.5)
        assert fit.log_c == pytest.approx(math.log(2.0))
        assert fit.to_dict()["setting"] == "a"

    def test_fluctuation_fit_skips_short_groups(self):
        table = pd.DataFrame({"setting": ["a"], "n": [4], "depth": [4], "log_F_M_std": [0.1]})
        assert fit_fluctuation_exponent(table) == []


    @pytest.mark.slow
    def test_fluctuation_exponent_from_exact_runs(self):
        settings = [FidelitySetting(label="below", sigma_ratio=0.2)]
        table = fidelity_scaling([4], [4, 8, 16, 32], settings, 300, EnsembleRunner(7))
        assert (table["log_F_M_non_finite"] == 0).all()
        (fit,) = fit_fluctuation_exponent(table)
        assert abs(fit.beta - 0.5) < 0.2
        assert fit.r2 > 0.9


# ============================================================================
# Reduced-scale ensembles
# ============================================================================

def _haar_site_renyi2(n: int) -> float:
    return -math.log2((2.0 + 2.0 ** (n - 1)) / (2.0**n + 1.0))


def _replica_table(kind, quantity, sizes, ratios, realizations, seed=20240601, q_bar=0.3):
    spec = SweepSpec(
        engine=Engine.REPLICA,
        topology_kind=kind,
        sizes=sizes,
        sigma_ratios=ratios,
        realizations=realizations,
        master_seed=seed,
        probe=quantity,
        q_bar=q_bar,
    )
    return results_table(sweep(spec))


@pytest.mark.slow
class TestAllToAllThreshold:
    """Renyi-2 crossing and I_ab peak on averaged all-to-all circuits."""

    @pytest.fixture(scope="class")
    def renyi2_table(self):
        return _replica_table(TopologyKind.ALL_TO_ALL, Probe.RENYI2, [4, 12], [0.0, 0.5, 1.0], 600)

    def test_clean_point_is_haar(self, renyi2_table):
        clean = renyi2_table[renyi2_table["sigma_ratio"] == 0.0].set_index("n")["mean"]
        for n in (4, 12):
            assert clean[n] == pytest.approx(_haar_site_renyi2(n), abs=1e-9)
        assert clean[12] > clean[4]

    def test_strong_disorder_goes_negative(self, renyi2_table):
        strong = renyi2_table[renyi2_table["sigma_ratio"] == 1.0].set_index("n")["mean"]
        assert strong[12] < strong[4]
        assert strong[12] < 0.0

    def test_curves_cross(self, renyi2_table):
        result = find_crossing(curves_from_table(renyi2_table))
        assert result.found
        assert 0.0 < result.estimate < 1.0

    def test_collapse_scan_on_sweep_data(self, renyi2_table):
        curves = curves_from_table(renyi2_table)
        scan = scan_collapse(curves, [0.3, 0.5, 0.7, 0.9], [0.5, 1.0, 2.0])
        assert np.isfinite(scan.quality).all()
        frame = scan.to_frame()
        assert len(frame) == 12
        best = frame.loc[frame["quality"].idxmin()]
        assert (best["sigma_c"], best["mu"]) == (scan.best_sigma_c, scan.best_mu)

    def test_correlation_peaks_inside_grid(self):
        table = _replica_table(
            TopologyKind.ALL_TO_ALL, Probe.I_AB, [8], [0.0, 0.2, 0.4, 0.6, 0.8, 1.0], 600
        )
        (peak,) = peak_positions(table).to_dict("records")
        assert peak["interior"]
        assert peak["y_peak"] > table[table["sigma_ratio"] == 0.0]["mean"].iloc[0]


@pytest.mark.slow
class TestChainPeaks:
    """Quenched chain I_ab: interior peaks that sit below sigma/q_bar = 0.5."""

    def test_peaks_are_interior(self):
        ratios = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6]
        table = _replica_table(TopologyKind.CHAIN_1D_PERIODIC, Probe.I_AB, [8, 12], ratios, 400)
        peaks = peak_positions(table)
        assert peaks["interior"].all()
        assert (peaks["x_peak"] < 0.5).all()


@pytest.mark.slow
class TestExactMutualInformation:
    """Small exact-engine mutual-information sweep."""

    def test_sweep_is_finite_and_pure_at_zero_disorder(self):
        spec = SweepSpec(
            engine=Engine.EXACT,
            topology_kind=TopologyKind.ALL_TO_ALL,
            sizes=[6],
            sigma_ratios=[0.0, 0.3, 0.6],
            realizations=20,
            master_seed=5,
            probe=Probe.MUTUAL_INFORMATION,
        )
        table = results_table(sweep(spec))
        assert (table["count"] == 20).all()
        clean = table[table["sigma_ratio"] == 0.0].iloc[0]
        assert clean["count"] == 20
        assert 0.0 < clean["mean"] < 2.0


@pytest.mark.slow
class TestRareRegionInstability:
    """Growth at p = 0.5, q1 = 0.02, q2 = 0.3."""

    DISORDER = DisorderSpec(p=0.5, q1=0.02, q2=0.3, mode=DisorderMode.QUENCHED)

    @pytest.mark.parametrize("n", [12, 14])
    def test_selected_field_has_rare_region(self, n):
        rng = RealizationStreams(11).stream("instability", n)
        fit = instability_experiment(n, self.DISORDER, 24, rng=rng, require_rare_region=True)
        assert fit.rare_region
        assert fit.run_length >= 6
        assert fit.draws >= 1
        assert fit.slope > 0.0
        assert fit.r2 > 0.9
        assert fit.max_split_residual < 1e-9

    def test_growth_rate_increases_with_run_length(self):
        slopes = []
        for n, k in [(12, 6), (14, 7), (16, 8)]:
            field = _planted_field([0.02] * k + [0.3] * (n - k), 24, q1=0.02, q2=0.3)
            slopes.append(instability_experiment(n, self.DISORDER, 24, field=field).slope)
        assert slopes[0] > 0.0
        assert slopes[0] < slopes[1] < slopes[2]

    def test_draw_budget_exhausted(self):
        disorder = DisorderSpec(p=0.0, q1=0.02, q2=0.3, mode=DisorderMode.QUENCHED, seed=3)
        with pytest.raises(DegenerateFieldError, match="No rare region"):
            draw_rare_region_field(8, disorder, 4, max_draws=2)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
