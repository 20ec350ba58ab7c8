"""Experiment runner: config validation, reproducibility, CLI contract."""

import hashlib
import json
import os

import pytest

from hypercouple import (
    DomainError,
    ExperimentConfig,
    run_experiment,
    validate_gamma_epsilon,
)
from hypercouple.experiments import (
    _parse_p_mode,
    config_from_args,
    main,
)


def data_digests(path):
    out = {}
    for name in sorted(os.listdir(path)):
        if name == "manifest.json":
            continue
        with open(os.path.join(path, name), "rb") as fh:
            out[name] = hashlib.sha256(fh.read()).hexdigest()
    return out


def read_json(path, name="summary.json"):
    with open(os.path.join(path, name)) as fh:
        return json.load(fh)


class TestConfig:
    def test_kind_and_ranges(self):
        with pytest.raises(DomainError):
            ExperimentConfig(kind="frobnicate")
        with pytest.raises(DomainError):
            ExperimentConfig(kind="sample", trials=0)
        with pytest.raises(DomainError):
            ExperimentConfig(kind="sample", jobs=0)
        with pytest.raises(DomainError):
            ExperimentConfig(kind="sample", fmt="xml")

    def test_p_mode_parser(self):
        assert _parse_p_mode("exact") == ("exact", 0)
        assert _parse_p_mode("mc:500") == ("mc", 500)
        with pytest.raises(DomainError):
            _parse_p_mode("montecarlo")

    def test_cli_arg_mapping(self):
        cfg = config_from_args(
            ["couple", "--n", "6", "--k", "3", "--d", "2", "--gamma", "0.75",
             "--traces", "40", "--seed", "9", "--jobs", "2"])
        assert cfg.kind == "couple" and cfg.trials == 40 and cfg.seed == 9
        assert cfg.options["gamma"] == 0.75


class TestReproducibility:
    @pytest.mark.parametrize("jobs", [1, 2])
    def test_sample_outputs_independent_of_parallelism(self, tmp_path, jobs):
        out = tmp_path / f"j{jobs}"
        cfg = ExperimentConfig(kind="sample", seed=5, trials=6, jobs=jobs,
                               out=str(out), fmt="csv",
                               options={"model": "regular", "n": 6, "k": 3,
                                        "d": 2})
        man = run_experiment(cfg)
        digests = data_digests(out)
        assert man.digests == digests
        # stash against the canonical single-job run
        ref = tmp_path / "ref"
        run_experiment(ExperimentConfig(
            kind="sample", seed=5, trials=6, jobs=1, out=str(ref), fmt="csv",
            options={"model": "regular", "n": 6, "k": 3, "d": 2}))
        assert data_digests(ref) == digests

    def test_identical_runs_have_identical_digests(self, tmp_path):
        opts = {"n": 6, "k": 3, "d": 2, "gamma": 0.75}
        runs = []
        for tag in ("a", "b"):
            out = tmp_path / tag
            run_experiment(ExperimentConfig(kind="couple", seed=3, trials=50,
                                            out=str(out), options=dict(opts)))
            runs.append(data_digests(out))
        assert runs[0] == runs[1]

    def test_manifest_shape(self, tmp_path):
        out = tmp_path / "m"
        run_experiment(ExperimentConfig(kind="sample", seed=1, trials=2,
                                        out=str(out),
                                        options={"model": "gnm", "n": 5,
                                                 "k": 2, "m": 3}))
        man = read_json(out, "manifest.json")
        assert man["kind"] == "sample"
        assert man["config"]["seed"] == 1
        assert "wall_clock_s" in man
        assert set(man["digests"]) == set(data_digests(out))


class TestRunners:
    def test_couple_summary_fields(self, tmp_path):
        out = tmp_path / "c"
        run_experiment(ExperimentConfig(
            kind="couple", seed=2, trials=60, out=str(out),
            options={"n": 6, "k": 3, "d": 2, "gamma": 0.75}))
        s = read_json(out)
        for key in ("contained_rate", "A_all_rate", "S_lt_m_rate",
                    "accepted_mean", "chebyshev_bound_S_lt_m", "tv_checks"):
            assert key in s
        assert s["interval_method"] == "wilson-95"
        assert s["tv_checks"]["family_size"] == 75
        assert 0.0 <= s["contained_rate"]["rate"] <= 1.0

    def test_couple_emit_traces_rows(self, tmp_path):
        out = tmp_path / "e"
        run_experiment(ExperimentConfig(
            kind="couple", seed=2, trials=3, out=str(out),
            options={"n": 4, "k": 2, "d": 2, "gamma": 0.75,
                     "emit_traces": True}))
        rows = (out / "rows.csv").read_text().splitlines()
        assert rows[0] == "trial,t,xi,A_t,branch"
        assert len(rows) == 1 + 3 * 4        # M=4 steps per trace

    def test_gnp_needs_explicit_p_at_large_gamma(self, tmp_path):
        cfg = ExperimentConfig(kind="couple-gnp", seed=0, trials=5,
                               out=str(tmp_path / "g"),
                               options={"n": 6, "k": 3, "d": 2,
                                        "gamma": 0.75})
        with pytest.raises(DomainError, match="gamma < 1/2"):
            run_experiment(cfg)

    def test_switching_verify_balances(self, tmp_path):
        out = tmp_path / "s"
        run_experiment(ExperimentConfig(
            kind="switching-verify", seed=0, out=str(out),
            options={"n": 5, "k": 2, "d": 2, "switch_kind": "pair_degree",
                     "u": 1, "v": 2}))
        s = read_json(out)
        assert s["balanced"] is True
        assert s["interval"]["is_interval"] is True

    def test_oracle_dump_matches_known_counts(self, tmp_path):
        out = tmp_path / "o"
        run_experiment(ExperimentConfig(
            kind="oracle-dump", seed=0, out=str(out),
            options={"n": 6, "k": 3, "d": 2}))
        s = read_json(out)
        assert s["unordered_completions"] == 75
        assert s["ordered_completions"] == 1800
        assert s["simplicity_probability"] == "24/77"

    def test_process_stats_summary(self, tmp_path):
        out = tmp_path / "p"
        run_experiment(ExperimentConfig(
            kind="process-stats", seed=4, trials=150, out=str(out),
            options={"n": 9, "k": 3, "d": 2}))
        s = read_json(out)
        assert s["envelope_a"] == 15.0
        assert s["envelope_exceed_rate"] == 0.0
        assert s["max_abs_mean_z"] < 5.0

    def test_hamilton_sweep_rows(self, tmp_path):
        out = tmp_path / "h"
        run_experiment(ExperimentConfig(
            kind="hamilton-sweep", seed=1, trials=6, out=str(out),
            options={"n": 8, "k": 3, "ell": 2, "d_values": [3, 21]}))
        rows = (out / "rows.csv").read_text().splitlines()
        assert rows[0].startswith("d,trials,ham")
        s = read_json(out)
        assert s["p_hat"]["21"] == 1.0


class TestAdvisory:
    def test_feasible_and_infeasible_cases(self):
        good = validate_gamma_epsilon(20, 3, 6, 0.9)
        assert good["feasible"] and good["suggested_epsilon"] is not None
        tight = validate_gamma_epsilon(30, 3, 8, 0.75)
        assert not tight["feasible"]

    def test_gamma_one_is_never_feasible(self):
        rep = validate_gamma_epsilon(20, 3, 6, 1.0)
        assert not rep["feasible"]          # strict gamma < 1 boundary
        assert rep["suggested_epsilon"] is None
        assert "outside (0, 1)" in rep["epsilon_error"]

    def test_small_k_remark_present(self):
        rep = validate_gamma_epsilon(20, 3, 6, 0.9)
        assert rep["k_le_7_note"] is not None


class TestCliBoundary:
    def test_exit_zero_and_stdout_json(self, capsys):
        rc = main(["oracle-dump", "--n", "4", "--k", "2", "--d", "1"])
        assert rc == 0
        out = json.loads(capsys.readouterr().out)
        assert out["unordered_completions"] == 3

    def test_config_errors_exit_two(self, capsys):
        assert main(["sample", "--n", "5", "--k", "3", "--d", "2"]) == 2
        assert main(["couple", "--n", "6", "--k", "3", "--d", "2",
                     "--gamma", "0.01"]) == 2
        assert main(["bogus-subcommand"]) == 2

    def test_exhausted_budget_exits_two(self, capsys, monkeypatch):
        monkeypatch.setenv("HYPERCOUPLE_NODE_BUDGET", "50")
        rc = main(["oracle-dump", "--n", "6", "--k", "3", "--d", "2"])
        assert rc == 2
        assert "budget exhausted" in capsys.readouterr().err

    def test_help_exits_zero(self):
        assert main(["--help"]) == 0
