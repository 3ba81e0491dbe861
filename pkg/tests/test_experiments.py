import csv
import math

import numpy as np
import pytest
import yaml

from netform.experiments import (CSV_COLUMNS, PRESETS, ConfigError,
                                 ExperimentConfig, PopulationSpec, SweepAxis,
                                 aggregate, config_from_dict, config_to_dict,
                                 derive_seed, export, load_config, run_paired,
                                 sweep, write_metrics_csv)

SMALL = ExperimentConfig(
    population=PopulationSpec((6, 6), ((3, 3), (3, 3))),
    delta=0.7, c_low=0.2, c_high=1.0,
    axes=(SweepAxis("c_low", (0.2, 0.75)),),
    betas=(7.0,), repeats=2, seed_base=11)


class TestConfigValidation:
    def test_population_spec_counts_checked(self):
        with pytest.raises(ConfigError):
            PopulationSpec((4,), ((1, 1),))

    def test_axis_parameter_checked(self):
        with pytest.raises(ConfigError):
            SweepAxis("delta", (0.5,))

    def test_grid_point_cost_ordering_checked(self):
        with pytest.raises(ConfigError):
            ExperimentConfig(population=SMALL.population, delta=0.7,
                             c_low=0.2, c_high=1.0,
                             axes=(SweepAxis("c_low", (1.5,)),))

    def test_repeats_positive(self):
        with pytest.raises(ConfigError):
            ExperimentConfig(population=SMALL.population, delta=0.7,
                             c_low=0.2, c_high=1.0, axes=SMALL.axes, repeats=0)

    def test_unknown_regime_rejected(self):
        with pytest.raises(ConfigError):
            ExperimentConfig(population=SMALL.population, delta=0.7,
                             c_low=0.2, c_high=1.0, axes=SMALL.axes,
                             regimes=("biased", "oracle"))


class TestSeedDerivation:
    def test_deterministic(self):
        assert derive_seed(11, "c_low", 0, 1) == derive_seed(11, "c_low", 0, 1)

    def test_distinct_across_points_and_repeats(self):
        seeds = {derive_seed(11, axis, vi, rep)
                 for axis in ("c_low", "c_high")
                 for vi in range(8) for rep in range(30)}
        assert len(seeds) == 2 * 8 * 30


class TestRunPaired:
    def test_triple_shares_seed_and_pairs_by_regime(self):
        records = run_paired(SMALL, "c_low", 0, 0)
        assert [r.regime for r in records] == ["complete", "rational", "biased"]
        assert len({r.seed for r in records}) == 1
        complete, rational, biased = records
        assert complete.metrics.discovery == 1.0
        n = SMALL.population.n
        for r in (rational, biased):
            assert 1 / n <= r.metrics.discovery <= 1.0

    def test_complete_information_links_all_same_type_partners(self):
        cfg = PRESETS["base"]
        rec = run_paired(cfg, "c_low", 1, 0)[0]  # c_low = 0.15 < delta - delta^2
        assert rec.regime == "complete"
        assert rec.metrics.mean_degree >= 23 / 47

    def test_high_intra_cost_collapses_complete_info(self):
        # c_low = 0.75 > delta: every link strictly loses.
        records = run_paired(SMALL, "c_low", 1, 0)
        complete = records[0]
        assert complete.metrics.mean_degree == 0.0
        assert complete.status == "Converged"

    def test_infinite_beta_collapses_to_rational(self):
        cfg = ExperimentConfig(
            population=SMALL.population, delta=0.7, c_low=0.2, c_high=1.0,
            axes=SMALL.axes, betas=(math.inf,), repeats=1, seed_base=7)
        _, rational, biased = run_paired(cfg, "c_low", 0, 0, keep_states=True)
        assert np.array_equal(rational.final.adjacency, biased.final.adjacency)
        assert rational.metrics.freeman == biased.metrics.freeman
        assert biased.metrics.s_is_vs_rational in (0.0, None)

    def test_biased_records_per_beta_share_the_pair_stream(self):
        cfg = ExperimentConfig(
            population=SMALL.population, delta=0.7, c_low=0.2, c_high=1.0,
            axes=SMALL.axes, betas=(15.0, 3.0), repeats=1, seed_base=7)
        records = run_paired(cfg, "c_low", 0, 0)
        biased = [r for r in records if r.regime == "biased"]
        assert [r.beta for r in biased] == [15.0, 3.0]
        assert len({r.seed for r in records}) == 1


class TestSweep:
    def test_record_counts_and_ordering(self):
        records = sweep(SMALL)
        points = len(SMALL.axes[0].values)
        assert len(records) == points * SMALL.repeats * len(SMALL.regimes)
        keys = [(r.axis, r.value_index, r.repeat) for r in records]
        assert keys == sorted(keys, key=lambda k: (k[1], k[2]))

    def test_aggregate_drops_undefined_values(self):
        records = sweep(SMALL)
        summaries = aggregate(SMALL, records)
        collapsed = [s for s in summaries if s.value == 0.75 and s.regime == "rational"]
        assert collapsed[0].p_inter_mean is None
        assert collapsed[0].p_inter_undefined == SMALL.repeats
        linked = [s for s in summaries if s.value == 0.2 and s.regime == "complete"]
        assert linked[0].count == SMALL.repeats
        assert linked[0].p_inter_undefined == 0


class TestExport:
    def test_metrics_csv_columns_and_rerun_bytes(self, tmp_path):
        records = sweep(SMALL)
        path_a = tmp_path / "a.csv"
        path_b = tmp_path / "b.csv"
        write_metrics_csv(records, str(path_a))
        write_metrics_csv(sweep(SMALL), str(path_b))
        assert path_a.read_bytes() == path_b.read_bytes()
        with open(path_a) as fh:
            rows = list(csv.reader(fh))
        assert tuple(rows[0]) == CSV_COLUMNS
        assert len(rows) == len(records) + 1

    def test_export_writes_all_artifacts(self, tmp_path):
        records = sweep(SMALL, keep_states=True)
        paths = export(SMALL, records, str(tmp_path / "out"))
        for key in ("metrics", "beliefs", "snapshots", "edges"):
            assert key in paths
        import json
        with open(paths["snapshots"]) as fh:
            snaps = json.load(fh)
        assert len(snaps) == len(records)
        empty = [s for s in snaps if not s["edges"]]
        assert all(s["singleton"] for s in empty)

    def test_belief_density_matches_closed_form_cdf(self, tmp_path):
        out = tmp_path / "density.csv"
        from netform.experiments import write_belief_density
        write_belief_density(SMALL, str(out), draws=20_000, seed=3)
        gammas = []
        with open(out) as fh:
            for row in csv.DictReader(fh):
                assert float(row["beta"]) == 7.0
                gammas.append(float(row["gamma"]))
        g = np.sort(gammas)
        ecdf = np.arange(1, g.size + 1) / g.size
        cdf = 1 - (1 - g) ** 7
        ks = max(np.abs(ecdf - cdf).max(), np.abs(ecdf - 1 / g.size - cdf).max())
        assert ks < 0.02


class TestConfigFiles:
    def test_yaml_round_trip(self, tmp_path):
        path = tmp_path / "config.yaml"
        path.write_text(yaml.safe_dump(config_to_dict(SMALL)))
        loaded = load_config(str(path))
        assert loaded == SMALL

    def test_missing_field_reported(self):
        data = config_to_dict(SMALL)
        del data["delta"]
        with pytest.raises(ConfigError, match="delta"):
            config_from_dict(data)

    def test_unsupported_schema_rejected(self):
        data = config_to_dict(SMALL)
        data["schema"] = 99
        with pytest.raises(ConfigError, match="schema"):
            config_from_dict(data)


class TestPresets:
    def test_all_presets_build(self):
        for name, cfg in PRESETS.items():
            pop = cfg.population.build()
            assert pop.n == 48, name
            assert cfg.repeats == 30

    def test_compositions(self):
        assert PRESETS["base"].population.type_counts == ((12, 12), (12, 12))
        assert PRESETS["groups4"].population.group_sizes == (12, 12, 12, 12)
        assert PRESETS["imbalanced-groups"].population.group_sizes == (12, 36)
        assert PRESETS["types4"].population.type_counts == ((6, 6, 6, 6), (6, 6, 6, 6))
        assert PRESETS["imbalanced-types"].population.type_counts == ((18, 6), (18, 6))
        assert PRESETS["correlated"].population.type_counts == ((18, 6), (6, 18))

    def test_base_grids_bracket_collapse(self):
        cfg = PRESETS["base"]
        by_param = {a.parameter: a.values for a in cfg.axes}
        assert max(by_param["c_low"]) > cfg.delta
        assert max(by_param["c_high"]) > cfg.delta + cfg.delta ** 2
