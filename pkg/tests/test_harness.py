"""Scenario loading, strict schema validation, reports, CSV/JSON output, CLI."""

import json

import numpy as np
import pytest

from hybrideq import (
    BUILTIN_SCENARIOS,
    RunReport,
    ScenarioParseError,
    ScenarioValidationError,
    UnsupportedCombinationError,
    build_bundle,
    emit_report,
    load_scenario,
    run_scenario,
)
from hybrideq.cli import main as cli_main

TINY = {
    "name": "tiny",
    "space": {"dimension": 2, "exponent": 2.0},
    "bundle": {
        "base_set": {"kind": "p_ball", "radius": 1.0},
        "operators": [{"kind": "shift", "relax_weight": 0.5}],
        "combination_weights": [0.5, 0.5],
        "bifunctions": [],
        "mixed_term": {"kind": "zero"},
        "perturbation": {"kind": "zero"},
        "start": [0.0, 0.0],
        "reference_solution": [0.0, 0.0],
    },
    "config": {"mode": "hilbert", "max_outer": 5, "outer_tol": 1e-6},
    "seed": 3,
}


class TestLoadScenario:
    def test_builtins_load(self):
        for name in ("lp_shift_example", "hilbert_family", "optimization_app"):
            spec = load_scenario(name)
            assert spec.name == name

    def test_builtin_contents(self):
        lp = load_scenario("lp_shift_example")
        assert lp.space == {"dimension": 8, "exponent": 3.0}
        assert lp.bundle["perturbation"] == {"kind": "duality"}
        assert lp.bundle["reference_solution"] == [0.0] * 8
        assert lp.seed == 7
        opt = load_scenario("optimization_app")
        assert opt.bundle["mixed_term"] == {"kind": "weighted_l1", "weight": 0.3}
        assert opt.bundle["bifunctions"][0]["center"] == [1.0, -2.0, 0.5]

    def test_dict_loads(self):
        spec = load_scenario(dict(TINY))
        assert spec.name == "tiny"

    def test_json_file_loads(self, tmp_path):
        path = tmp_path / "scenario.json"
        path.write_text(json.dumps(TINY))
        spec = load_scenario(str(path))
        assert spec.name == "tiny"

    def test_parse_error_carries_location(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{"name": "x",\n  "space": }')
        with pytest.raises(ScenarioParseError) as err:
            load_scenario(str(path))
        assert "2:" in str(err.value)  # line number of the offending token

    def test_missing_file(self):
        with pytest.raises(ScenarioParseError):
            load_scenario("/nonexistent/path/to/scenario.json")


class TestStrictValidation:
    def test_unknown_top_level_key(self):
        doc = dict(TINY)
        doc["extra"] = 1
        with pytest.raises(ScenarioValidationError) as err:
            load_scenario(doc)
        assert "extra" in str(err.value)

    def test_unknown_nested_key_names_path(self):
        doc = json.loads(json.dumps(TINY))
        doc["bundle"]["mixed_term"]["typo"] = 1
        with pytest.raises(ScenarioValidationError) as err:
            load_scenario(doc)
        assert "bundle.mixed_term" in str(err.value)
        assert "typo" in str(err.value)

    def test_bad_mode_named(self):
        doc = json.loads(json.dumps(TINY))
        doc["config"]["mode"] = "euclidean"
        with pytest.raises(ScenarioValidationError) as err:
            load_scenario(doc)
        assert "config.mode" in str(err.value)

    def test_simplex_violation_rejected(self):
        doc = json.loads(json.dumps(TINY))
        doc["bundle"]["combination_weights"] = [0.6, 0.6]
        with pytest.raises(ScenarioValidationError) as err:
            load_scenario(doc)
        assert "combination_weights" in str(err.value)

    def test_relax_weight_band_rejected(self):
        doc = json.loads(json.dumps(TINY))
        doc["bundle"]["operators"][0]["relax_weight"] = 0.9
        with pytest.raises(ScenarioValidationError):
            load_scenario(doc)

    def test_start_outside_base_rejected(self):
        doc = json.loads(json.dumps(TINY))
        doc["bundle"]["start"] = [2.0, 0.0]
        with pytest.raises(ScenarioValidationError):
            load_scenario(doc)

    def test_hilbert_mode_needs_p2(self):
        doc = json.loads(json.dumps(TINY))
        doc["space"]["exponent"] = 3.0
        with pytest.raises(UnsupportedCombinationError):
            load_scenario(doc)

    def test_banach_box_rejected(self):
        doc = json.loads(json.dumps(TINY))
        doc["space"]["exponent"] = 3.0
        doc["config"]["mode"] = "banach"
        doc["bundle"]["base_set"] = {"kind": "box", "lower": [-1, -1], "upper": [1, 1]}
        doc["bundle"]["start"] = "random_feasible"
        with pytest.raises(UnsupportedCombinationError):
            load_scenario(doc)

    def test_unsupported_equilibrium_class_rejected_at_load(self):
        doc = json.loads(json.dumps(TINY))
        doc["space"]["exponent"] = 3.0
        doc["config"]["mode"] = "banach"
        doc["bundle"]["bifunctions"] = [
            {"kind": "quadratic_potential", "center": [0.0, 0.0]}
        ]
        doc["bundle"]["mixed_term"] = {"kind": "dual_norm"}
        doc["bundle"]["perturbation"] = {"kind": "duality"}
        with pytest.raises(UnsupportedCombinationError):
            load_scenario(doc)


class TestRunScenario:
    def test_anchor_at_solution_converges_immediately(self):
        report = run_scenario(load_scenario(dict(TINY)))
        assert report.outcome == "converged"
        assert report.iterations == 1
        assert report.audits_passed
        assert report.final_norm <= 1e-9

    def test_zero_max_outer_reports_cap(self):
        doc = json.loads(json.dumps(TINY))
        doc["config"]["max_outer"] = 0
        report = run_scenario(load_scenario(doc))
        assert report.outcome == "iteration_cap"
        assert report.iterations == 0
        np.testing.assert_allclose(report.final_point, [0.0, 0.0])

    def test_report_round_trips_through_json(self):
        report = run_scenario(load_scenario(dict(TINY)))
        doc = json.loads(json.dumps(report.to_dict()))
        assert RunReport.from_dict(doc) == report

    def test_deterministic_rows(self):
        doc = json.loads(json.dumps(BUILTIN_SCENARIOS["optimization_app"]))
        doc["config"]["max_outer"] = 6
        a = run_scenario(load_scenario(doc))
        b = run_scenario(load_scenario(doc))
        assert a.rows == b.rows  # bit-identical numeric trace


class TestEmitReport:
    def _report(self, max_outer=4):
        doc = json.loads(json.dumps(BUILTIN_SCENARIOS["optimization_app"]))
        doc["config"]["max_outer"] = max_outer
        return run_scenario(load_scenario(doc))

    def test_csv_shape_and_format(self, tmp_path):
        report = self._report()
        csv_path, json_path = emit_report(report, tmp_path)
        text = csv_path.read_text()
        lines = text.split("\n")
        assert lines[0] == (
            "n,x_norm,phi_anchor,gap_xu,resolvent_gap,"
            "retraction_residual,fejer_slack,cut_count"
        )
        assert len([l for l in lines[1:] if l]) == report.iterations
        assert "\r" not in text  # LF endings only
        # numeric fields carry 17 significant digits
        field = lines[1].split(",")[1]
        assert len(field.replace(".", "").replace("-", "").lstrip("0")) >= 16

    def test_csv_bit_identical_across_runs(self, tmp_path):
        a = emit_report(self._report(), tmp_path / "a")[0].read_text()
        b = emit_report(self._report(), tmp_path / "b")[0].read_text()
        assert a == b

    def test_summary_json_mirrors_report(self, tmp_path):
        report = self._report()
        _, json_path = emit_report(report, tmp_path)
        loaded = RunReport.from_dict(json.loads(json_path.read_text()))
        assert loaded == report

    def test_missing_reference_writes_nan(self, tmp_path):
        doc = json.loads(json.dumps(TINY))
        doc["bundle"]["reference_solution"] = None
        doc["bundle"]["start"] = [0.3, 0.1]
        doc["config"]["max_outer"] = 2
        report = run_scenario(load_scenario(doc))
        csv_path, _ = emit_report(report, tmp_path)
        row = csv_path.read_text().split("\n")[1].split(",")
        assert row[6] == "nan"


class TestCLI:
    def test_list_scenarios(self, capsys):
        assert cli_main(["list-scenarios"]) == 0
        out = capsys.readouterr().out
        for name in BUILTIN_SCENARIOS:
            assert name in out

    def test_solve_writes_outputs_and_exits_zero(self, tmp_path, capsys):
        path = tmp_path / "tiny.json"
        path.write_text(json.dumps(TINY))
        code = cli_main(["solve", "--scenario", str(path), "--out", str(tmp_path / "out")])
        assert code == 0
        assert (tmp_path / "out" / "tiny_iterations.csv").exists()
        assert (tmp_path / "out" / "tiny_summary.json").exists()

    def test_solve_iteration_cap_exits_three(self, tmp_path):
        path = tmp_path / "tiny.json"
        path.write_text(json.dumps(TINY))
        code = cli_main(["solve", "--scenario", str(path), "--max-iter", "0"])
        assert code == 3

    def test_unknown_scenario_exits_one(self, capsys):
        assert cli_main(["solve", "--scenario", "/no/such/file.json"]) == 1
        assert "error" in capsys.readouterr().err

    def test_invalid_document_exits_one(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        doc = dict(TINY)
        doc["bogus"] = True
        path.write_text(json.dumps(doc))
        assert cli_main(["solve", "--scenario", str(path)]) == 1

    def test_verify_passes_on_trivial_run(self, tmp_path, capsys):
        path = tmp_path / "tiny.json"
        path.write_text(json.dumps(TINY))
        assert cli_main(["verify", "--scenario", str(path)]) == 0
        out = capsys.readouterr().out
        assert "PASS" in out

    def test_seed_override_changes_start(self, tmp_path):
        doc = json.loads(json.dumps(TINY))
        doc["bundle"]["start"] = "random_feasible"
        spec_a = load_scenario(doc)
        doc_b = json.loads(json.dumps(doc))
        doc_b["seed"] = 99
        spec_b = load_scenario(doc_b)
        a = build_bundle(spec_a).anchor.coords
        b = build_bundle(spec_b).anchor.coords
        assert not np.allclose(a, b)


class TestFailureReporting:
    def test_non_convergence_becomes_failed_report(self):
        doc = json.loads(json.dumps(BUILTIN_SCENARIOS["lp_shift_example"]))
        doc["config"]["cut_cap"] = 2
        report = run_scenario(load_scenario(doc))
        assert report.outcome == "non_converged"
        assert report.error is not None
        assert not report.audits_passed

    def test_exit_code_mapping(self):
        from hybrideq.cli import _report_exit_code

        base = run_scenario(load_scenario(dict(TINY)))
        assert _report_exit_code(base) == 0
        import dataclasses

        audit_fail = dataclasses.replace(base, audits_passed=False)
        assert _report_exit_code(audit_fail) == 2
        capped = dataclasses.replace(base, outcome="iteration_cap")
        assert _report_exit_code(capped) == 3
