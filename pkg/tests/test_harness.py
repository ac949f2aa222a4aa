import io
import json
from fractions import Fraction

import pytest

from flowpack import InstanceError, exact_opt
from flowpack.cli import run_cli
from flowpack.harness import (
    CSV_HEADER,
    generate_instance,
    instance_digest,
    instance_to_json,
    load_instance,
    load_solution,
    parse_instance,
    run_bench,
    solution_to_json,
    verify_solution,
    write_instance,
)

F = Fraction

MINIMAL = {
    "version": 1,
    "m": 1,
    "makespan_bound": "1",
    "jobs": [{"id": 1, "a": "0.5", "b": "0.3", "p": "10"}],
}


def as_stream(doc):
    return io.StringIO(json.dumps(doc))


class TestParseInstance:
    def test_minimal(self):
        inst = parse_instance(as_stream(MINIMAL))
        assert inst.m == 1
        assert inst.jobs[0].a == F(1, 2)
        assert inst.jobs[0].p == 10

    def test_scaling_applied(self):
        doc = {
            "version": 1,
            "m": 1,
            "makespan_bound": "2",
            "jobs": [{"id": 1, "a": "1", "b": "1", "p": "5"}],
        }
        inst = parse_instance(as_stream(doc))
        assert inst.jobs[0].a == F(1, 2)
        assert inst.makespan_bound == 1

    def test_oversized_job_dropped_and_reported(self):
        doc = dict(MINIMAL, jobs=[{"id": 1, "a": "0.7", "b": "0.7", "p": "9"}])
        inst, dropped = load_instance(as_stream(doc))
        assert inst.jobs == ()
        assert dropped == (1,)

    def test_malformed_json(self):
        with pytest.raises(InstanceError, match="malformed JSON"):
            parse_instance(io.StringIO("{nope"))

    def test_unknown_field_rejected(self):
        with pytest.raises(InstanceError, match="unknown fields"):
            parse_instance(as_stream(dict(MINIMAL, color="red")))

    def test_missing_field_rejected(self):
        doc = dict(MINIMAL)
        del doc["m"]
        with pytest.raises(InstanceError, match="missing"):
            parse_instance(as_stream(doc))

    def test_duplicate_ids_rejected(self):
        doc = dict(
            MINIMAL,
            jobs=[
                {"id": 1, "a": "0.1", "b": "0.1", "p": "1"},
                {"id": 1, "a": "0.2", "b": "0.2", "p": "2"},
            ],
        )
        with pytest.raises(InstanceError, match="duplicate"):
            parse_instance(as_stream(doc))

    def test_negative_value_rejected(self):
        doc = dict(MINIMAL, jobs=[{"id": 1, "a": "-0.1", "b": "0.1", "p": "1"}])
        with pytest.raises(InstanceError, match="negative"):
            parse_instance(as_stream(doc))

    def test_bad_number_rejected(self):
        doc = dict(MINIMAL, jobs=[{"id": 1, "a": "zero", "b": "0.1", "p": "1"}])
        with pytest.raises(InstanceError, match="not a rational"):
            parse_instance(as_stream(doc))

    def test_wrong_version_rejected(self):
        with pytest.raises(InstanceError, match="version"):
            parse_instance(as_stream(dict(MINIMAL, version=2)))

    def test_round_trip(self):
        inst = generate_instance(6, 2, 3, "uniform")
        again = parse_instance(io.StringIO(instance_to_json(inst)))
        assert again == inst


class TestGenerateInstance:
    def test_seed_determinism(self):
        assert generate_instance(5, 1, 7, "uniform") == generate_instance(5, 1, 7, "uniform")

    def test_knapsack_degenerate_has_no_second_stage(self):
        inst = generate_instance(6, 1, 3, "knapsack-degenerate")
        assert all(j.b == 0 for j in inst.jobs)

    def test_tight_oracle_selects_at_least_two(self):
        inst = generate_instance(4, 2, 11, "tight")
        assert len(exact_opt(inst).assigned_ids()) >= 2

    def test_unknown_profile(self):
        with pytest.raises(ValueError, match="unknown profile"):
            generate_instance(3, 1, 0, "bogus")

    def test_profiles_normalized(self):
        for profile in ("uniform", "correlated", "knapsack-degenerate", "tight"):
            inst = generate_instance(8, 2, 5, profile)
            assert inst.makespan_bound == 1
            assert all(j.a + j.b <= 1 and j.p >= 1 for j in inst.jobs)


class TestVerifySolution:
    def _pair(self, tmp_path):
        inst = generate_instance(5, 1, 9, "uniform")
        from flowpack import solve_ptas

        sol = solve_ptas(inst, F(1, 2))
        doc = json.loads(solution_to_json(inst, sol, "ptas_single", F(1, 2)))
        return inst, doc

    def test_accepts_solver_output(self, tmp_path):
        inst, doc = self._pair(tmp_path)
        assert verify_solution(inst, doc) == []

    def test_rejects_moved_job(self, tmp_path):
        inst, doc = self._pair(tmp_path)
        doc["flowshops"][0]["jobs"].append(3)
        assert any("makespan" in v for v in verify_solution(inst, doc))

    def test_rejects_wrong_profit(self, tmp_path):
        inst, doc = self._pair(tmp_path)
        doc["total_profit"] = "1"
        assert any("profit" in v for v in verify_solution(inst, doc))

    def test_rejects_digest_mismatch(self, tmp_path):
        inst, doc = self._pair(tmp_path)
        other = generate_instance(5, 1, 10, "uniform")
        assert any("digest" in v for v in verify_solution(other, doc))

    def test_rejects_unknown_job(self, tmp_path):
        inst, doc = self._pair(tmp_path)
        doc["flowshops"][0]["jobs"] = [99]
        assert any("unknown job" in v for v in verify_solution(inst, doc))

    def test_digest_tracks_content(self):
        a = generate_instance(4, 1, 1, "uniform")
        b = generate_instance(4, 1, 2, "uniform")
        assert instance_digest(a) != instance_digest(b)
        assert instance_digest(a) == instance_digest(parse_instance(io.StringIO(instance_to_json(a))))


class TestBench:
    def test_rows_and_header(self, tmp_path):
        d = tmp_path / "insts"
        d.mkdir()
        write_instance(generate_instance(4, 1, 1, "uniform"), d / "a.json")
        write_instance(generate_instance(4, 2, 2, "tight"), d / "b.json")
        csv_path = tmp_path / "out.csv"
        rows = run_bench(d, [F(1, 2)], csv_path, timing=False)
        lines = csv_path.read_text().splitlines()
        assert lines[0] == CSV_HEADER
        assert len(lines) == 3
        assert all(row.feasible for row in rows)
        for row in rows:
            assert row.opt is not None
            assert row.profit / row.opt <= 1
            # scaled mode is the default, so the requested ratio is met
            assert row.profit >= (1 - row.epsilon) * row.opt

    def test_empty_directory(self, tmp_path):
        d = tmp_path / "empty"
        d.mkdir()
        csv_path = tmp_path / "out.csv"
        rows = run_bench(d, [F(1, 2)], csv_path)
        assert rows == []
        assert csv_path.read_text() == CSV_HEADER + "\n"

    def test_oracle_refusal_leaves_ratio_empty(self, tmp_path):
        d = tmp_path / "insts"
        d.mkdir()
        write_instance(generate_instance(5, 1, 1, "uniform"), d / "a.json")
        csv_path = tmp_path / "out.csv"
        run_bench(d, [F(1, 2)], csv_path, timing=False, oracle_budget=1)
        line = csv_path.read_text().splitlines()[1]
        fields = line.split(",")
        assert fields[6] == "" and fields[7] == ""


class TestCli:
    def _gen(self, tmp_path, n=5, m=1, seed=9, profile="uniform"):
        path = tmp_path / "inst.json"
        assert run_cli([
            "gen", "--n", str(n), "--m", str(m), "--seed", str(seed),
            "--profile", profile, "--out", str(path),
        ]) == 0
        return path

    def test_solve_verify_round_trip(self, tmp_path, capsys):
        inst = self._gen(tmp_path)
        out = tmp_path / "sol.json"
        assert run_cli(["solve", "--instance", str(inst), "--epsilon", "1/2",
                        "--out", str(out)]) == 0
        assert run_cli(["verify", "--instance", str(inst), "--solution", str(out)]) == 0

    def test_verify_rejects_tampering(self, tmp_path, capsys):
        inst = self._gen(tmp_path)
        out = tmp_path / "sol.json"
        run_cli(["solve", "--instance", str(inst), "--epsilon", "1/2", "--out", str(out)])
        doc = json.loads(out.read_text())
        doc["flowshops"][0]["jobs"].append(3)
        out.write_text(json.dumps(doc))
        assert run_cli(["verify", "--instance", str(inst), "--solution", str(out)]) == 1

    def test_missing_epsilon_is_input_error(self, tmp_path, capsys):
        inst = self._gen(tmp_path)
        assert run_cli(["solve", "--instance", str(inst)]) == 2

    def test_bad_epsilon_is_input_error(self, tmp_path, capsys):
        inst = self._gen(tmp_path)
        assert run_cli(["solve", "--instance", str(inst), "--epsilon", "2"]) == 2

    def test_malformed_instance_is_input_error(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text("{broken")
        assert run_cli(["solve", "--instance", str(path), "--epsilon", "1/2"]) == 2

    def test_budget_refusal_exit_code(self, tmp_path, capsys):
        inst = self._gen(tmp_path, n=15)
        assert run_cli(["solve", "--instance", str(inst), "--algorithm", "exact"]) == 3

    def test_exact_matches_oracle(self, tmp_path, capsys):
        inst_path = self._gen(tmp_path, n=5)
        out = tmp_path / "sol.json"
        assert run_cli(["solve", "--instance", str(inst_path), "--algorithm", "exact",
                        "--out", str(out)]) == 0
        doc = load_solution(out)
        inst = parse_instance(inst_path)
        assert F(doc["total_profit"]) == exact_opt(inst).total_profit

    def test_gen_invalid_profile(self, tmp_path, capsys):
        assert run_cli(["gen", "--n", "3", "--m", "1", "--seed", "0",
                        "--profile", "nope", "--out", str(tmp_path / "x.json")]) == 2

    def test_unknown_subcommand(self, capsys):
        assert run_cli(["frobnicate"]) == 2

    def test_solve_stdout_when_no_out(self, tmp_path, capsys):
        inst = self._gen(tmp_path)
        capsys.readouterr()
        assert run_cli(["solve", "--instance", str(inst), "--epsilon", "1/2"]) == 0
        payload = capsys.readouterr().out
        doc = json.loads(payload)
        assert doc["feasible"] is True

    def test_dropped_job_warning(self, tmp_path, capsys):
        doc = {
            "version": 1,
            "m": 1,
            "makespan_bound": "1",
            "jobs": [
                {"id": 1, "a": "0.7", "b": "0.7", "p": "9"},
                {"id": 2, "a": "0.1", "b": "0.1", "p": "4"},
            ],
        }
        path = tmp_path / "inst.json"
        path.write_text(json.dumps(doc))
        assert run_cli(["solve", "--instance", str(path), "--epsilon", "1/2"]) == 0
        err = capsys.readouterr().err
        assert "dropped job 1" in err
