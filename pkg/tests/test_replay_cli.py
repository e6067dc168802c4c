import json

import pytest

from dynmatch.cli import main
from dynmatch.core import InstanceConfig
from dynmatch.errors import ReplayError
from dynmatch.replay import replay
from dynmatch.streams import StreamSpec, UpdateEvent, generate_stream


class TestReplay:
    def test_empty_stream(self):
        summary = replay([], InstanceConfig(4, 4, 2, algo_seed=1))
        assert summary["events"] == 0
        assert summary["final_m0"] == 0
        assert summary["mean_ns"] == 0.0

    def test_single_insert(self):
        events = [UpdateEvent("ins", 1, 2, 0)]
        summary = replay(events, InstanceConfig(4, 4, 2, algo_seed=1), oracle_every=1)
        assert summary["final_m0"] == 1
        assert summary["final_answer"] == 1
        assert summary["final_mu"] == 1
        assert summary["final_ratio"] == 1.0

    def test_rejects_invalid_stream(self):
        events = [UpdateEvent("del", 1, 2, 0)]
        with pytest.raises(ReplayError) as err:
            replay(events, InstanceConfig(4, 4, 2, algo_seed=1))
        assert err.value.seq == 0

    def test_metrics_file_is_line_json(self, tmp_path):
        events = generate_stream(StreamSpec("erdos-churn", 12, 6, 50, seed=2))
        path = tmp_path / "metrics.jsonl"
        summary = replay(
            events, InstanceConfig(12, 6, 2, algo_seed=3),
            oracle_every=10, metrics_path=path,
        )
        lines = path.read_text().strip().splitlines()
        assert len(lines) == 50
        recs = [json.loads(line) for line in lines]
        assert [r["seq"] for r in recs] == list(range(50))
        oracle_recs = [r for r in recs if r["mu"] is not None]
        assert len(oracle_recs) == 5
        for r in oracle_recs:
            assert r["answer"] <= r["mu"]
        assert summary["min_ratio"] is not None

    def test_metrics_deterministic_up_to_wall_clock(self, tmp_path):
        events = generate_stream(StreamSpec("erdos-churn", 12, 6, 60, seed=4))
        outs = []
        for run in range(2):
            path = tmp_path / f"m{run}.jsonl"
            replay(events, InstanceConfig(12, 6, 2, algo_seed=5),
                   oracle_every=20, metrics_path=path)
            recs = [json.loads(line) for line in path.read_text().splitlines()]
            for r in recs:
                r.pop("ns")
            outs.append(recs)
        assert outs[0] == outs[1]


class TestCli:
    def test_gen_run_validate(self, tmp_path, capsys):
        stream = tmp_path / "s.jsonl"
        rc = main([
            "gen", "--generator", "erdos-churn", "--n", "16", "--delta", "8",
            "--len", "40", "--seed", "1", "--out", str(stream),
        ])
        assert rc == 0
        metrics = tmp_path / "m.jsonl"
        summary = tmp_path / "summary.json"
        rc = main([
            "run", "--stream", str(stream), "--levels", "2", "--delta", "8",
            "--seed", "2", "--oracle-every", "10",
            "--out", str(metrics), "--summary", str(summary),
        ])
        assert rc == 0
        data = json.loads(summary.read_text())
        assert data["events"] == 40
        assert metrics.exists()
        rc = main(["validate", "--suite", "pivot-level"])
        assert rc == 0
        out = capsys.readouterr().out
        assert '"passed": true' in out

    def test_validate_equivalence_small(self):
        rc = main([
            "validate", "--suite", "equivalence",
            "--n", "12", "--delta", "6", "--updates", "60", "--seeds", "2",
        ])
        assert rc == 0
