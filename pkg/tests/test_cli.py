"""CLI subcommands, exit codes, artifact determinism."""

import hashlib
import json
from pathlib import Path

import pytest

from docbot.cli import main


def sha(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


class TestGenData:
    def test_identical_seeds_identical_bytes(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        for out in (a, b):
            code = main([
                "gen-data", "--out", str(out), "--contexts", "25",
                "--valid-contexts", "5", "--eval-contexts", "8", "--seed", "7",
            ])
            assert code == 0
        for name in ("train.jsonl", "valid.jsonl", "test.jsonl"):
            assert sha(a / name) == sha(b / name)

    def test_different_seed_differs(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        main(["gen-data", "--out", str(a), "--contexts", "10", "--seed", "1",
              "--valid-contexts", "2", "--eval-contexts", "2"])
        main(["gen-data", "--out", str(b), "--contexts", "10", "--seed", "2",
              "--valid-contexts", "2", "--eval-contexts", "2"])
        assert sha(a / "train.jsonl") != sha(b / "train.jsonl")

    def test_block_structure(self, tmp_path):
        main(["gen-data", "--out", str(tmp_path), "--contexts", "5",
              "--valid-contexts", "2", "--eval-contexts", "4", "--n", "10", "--seed", "0"])
        rows = [json.loads(l) for l in (tmp_path / "test.jsonl").read_text().splitlines()]
        assert len(rows) == 40
        for i in range(0, 40, 10):
            block = rows[i : i + 10]
            assert sum(r["label"] for r in block) == 1
            assert all(r["context"] == block[0]["context"] for r in block)


class TestIngestAndIndex:
    def test_ingest_file_then_rebuild(self, tmp_path, capsys):
        doc = tmp_path / "doc.txt"
        doc.write_text("The laptop weighs 1.4 kilograms. The laptop costs 999 dollars.")
        data_dir = str(tmp_path / "data")
        assert main(["ingest", str(doc), "--data-dir", data_dir]) == 0
        out = capsys.readouterr().out
        assert "sentences=2" in out
        assert main(["index", "--rebuild", "--data-dir", data_dir]) == 0
        assert "rebuilt 1" in capsys.readouterr().out

    def test_missing_path_is_data_error(self, tmp_path):
        assert main(["ingest", str(tmp_path / "absent.txt")]) == 2


class TestEval:
    def test_tfidf_eval_json(self, tmp_path, capsys):
        main(["gen-data", "--out", str(tmp_path), "--contexts", "12",
              "--valid-contexts", "2", "--eval-contexts", "6", "--seed", "3"])
        capsys.readouterr()
        code = main([
            "eval", "--tfidf", "--train-data", str(tmp_path / "train.jsonl"),
            "--data", str(tmp_path / "test.jsonl"), "--n", "10", "--k", "1,2,5", "--json",
        ])
        assert code == 0
        body = json.loads(capsys.readouterr().out.strip())
        assert set(body["recalls"]) == {"R10@1", "R10@2", "R10@5"}
        values = [body["recalls"][f"R10@{k}"] for k in (1, 2, 5)]
        assert values == sorted(values)

    def test_json_numbers_match_table(self, tmp_path, capsys):
        main(["gen-data", "--out", str(tmp_path), "--contexts", "12",
              "--valid-contexts", "2", "--eval-contexts", "5", "--seed", "3"])
        capsys.readouterr()
        argv = ["eval", "--tfidf", "--train-data", str(tmp_path / "train.jsonl"),
                "--data", str(tmp_path / "test.jsonl"), "--n", "10", "--k", "1,2"]
        main(argv + ["--json"])
        body = json.loads(capsys.readouterr().out.strip())
        main(argv)
        table = capsys.readouterr().out
        for k in (1, 2):
            assert f"R10@{k}  {body['recalls'][f'R10@{k}']:.3f}" in table

    def test_missing_model_is_model_error(self, tmp_path):
        main(["gen-data", "--out", str(tmp_path), "--contexts", "4",
              "--valid-contexts", "2", "--eval-contexts", "2", "--seed", "0"])
        code = main(["eval", "--data", str(tmp_path / "test.jsonl"), "--n", "10"])
        assert code == 3

    def test_malformed_jsonl_reports_line(self, tmp_path, capsys):
        bad = tmp_path / "bad.jsonl"
        bad.write_text('{"context": ["a"], "response": "b", "label": 1}\n{broken\n')
        code = main(["eval", "--tfidf", "--train-data", str(bad), "--data", str(bad)])
        assert code == 2
        assert ":2:" in capsys.readouterr().err


class TestTrainCommands:
    def test_train_and_eval_round_trip(self, tmp_path, capsys):
        main(["gen-data", "--out", str(tmp_path), "--contexts", "30",
              "--valid-contexts", "4", "--eval-contexts", "4", "--seed", "5"])
        model = tmp_path / "m.dbm"
        code = main([
            "train-matcher", "--data", str(tmp_path / "train.jsonl"), "--out", str(model),
            "--epochs", "1", "--embed-dim", "12", "--hidden-dim", "10", "--max-tokens", "12",
            "--max-utterances", "4", "--match-dim", "6", "--conv-filters", "2",
            "--batch-size", "16", "--seed", "0",
        ])
        assert code == 0 and model.is_file()
        capsys.readouterr()
        code = main(["eval", "--model", str(model), "--data", str(tmp_path / "test.jsonl"),
                     "--n", "10", "--k", "1,5", "--json"])
        assert code == 0
        body = json.loads(capsys.readouterr().out.strip())
        assert 0.0 <= body["recalls"]["R10@1"] <= 1.0

    def test_train_chitchat(self, tmp_path):
        pairs = tmp_path / "pairs.jsonl"
        pairs.write_text('{"query": "hi", "reply": "hello"}\n')
        model = tmp_path / "c.dbm"
        code = main(["train-chitchat", "--pairs", str(pairs), "--out", str(model),
                     "--epochs", "3", "--embed-dim", "6", "--hidden-dim", "6"])
        assert code == 0 and model.is_file()


class TestGradcheckCommand:
    def test_gradcheck_passes(self, capsys):
        assert main(["gradcheck"]) == 0
        assert "all gradient checks passed" in capsys.readouterr().out


class TestUsageErrors:
    def test_unknown_command_exit_1(self):
        with pytest.raises(SystemExit) as e:
            main(["frobnicate"])
        assert e.value.code == 1

    def test_missing_required_flag_exit_1(self):
        with pytest.raises(SystemExit) as e:
            main(["train-matcher", "--data", "x.jsonl"])
        assert e.value.code == 1
