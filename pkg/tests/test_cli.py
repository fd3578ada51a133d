import json

from click.testing import CliRunner

from policyloop.cli import main
from policyloop.corpus import serialize_policy

from conftest import make_tiny_corpus


def write_corpus_dir(tmp_path, n_docs=6):
    policies = tmp_path / "policies"
    policies.mkdir(parents=True)
    for doc in make_tiny_corpus(n_docs).documents:
        (policies / f"{doc.id}.json").write_text(
            json.dumps(serialize_policy(doc)), encoding="utf-8"
        )
    return policies


class TestIngest:
    def test_reports_counts(self, tmp_path):
        policies = write_corpus_dir(tmp_path)
        result = CliRunner().invoke(main, ["ingest", str(policies)])
        assert result.exit_code == 0
        assert "6 documents" in result.output
        assert "right_withdraw_consent: 6" in result.output

    def test_full_dataset_counts(self, dataset_dir):
        result = CliRunner().invoke(main, ["ingest", str(dataset_dir / "policies")])
        assert result.exit_code == 0
        assert "60 documents, 16635 blobs" in result.output
        assert "right_withdraw_consent: 95" in result.output

    def test_empty_dir_exits_2(self, tmp_path):
        result = CliRunner().invoke(main, ["ingest", str(tmp_path)])
        assert result.exit_code == 2

    def test_parse_failure_exits_2(self, tmp_path):
        policies = write_corpus_dir(tmp_path)
        (policies / "broken.json").write_text("{oops", encoding="utf-8")
        result = CliRunner().invoke(main, ["ingest", str(policies)])
        assert result.exit_code == 2
        assert "broken.json" in result.output


class TestBenchmark:
    def test_single_kind_single_rep(self, tmp_path):
        policies = write_corpus_dir(tmp_path)
        out = tmp_path / "report"
        result = CliRunner().invoke(
            main,
            ["benchmark", str(policies), "--kinds", "gaussian_nb",
             "--reps", "1", "--ks", "2,3", "--out", str(out)],
        )
        assert result.exit_code == 0, result.output
        report = json.loads(out.with_suffix(".json").read_text())
        assert report["kinds"] == ["gaussian_nb"]
        assert report["repetitions"] == 1
        # single repetition: every std is zero
        for cell in report["cells"]:
            for metric in cell["metrics"].values():
                assert metric["std"] == 0.0
        table = out.with_suffix(".txt").read_text()
        assert "2-rank" in table and "classification" in table


class TestInitRegistryAndServe:
    def test_init_registry_writes_extractors(self, tmp_path):
        policies = write_corpus_dir(tmp_path)
        registry = tmp_path / "registry"
        result = CliRunner().invoke(
            main,
            ["init-registry", str(policies), "--registry", str(registry),
             "--kinds", "gaussian_nb"],
        )
        assert result.exit_code == 0, result.output
        dirs = list(registry.glob("*/gaussian_nb/v001"))
        assert len(dirs) == 5
        assert "right_deletion/gaussian_nb: trained v1" in result.output

    def test_serve_without_registry_exits_3(self, tmp_path):
        result = CliRunner().invoke(
            main,
            ["serve", "--data-dir", str(tmp_path / "data"),
             "--registry", str(tmp_path / "missing")],
        )
        assert result.exit_code == 3
        assert "init-registry" in result.output


class TestMakeDataset:
    def test_writes_corpus_and_schema(self, dataset_dir):
        # the session fixture already exercised make_dataset; check artifacts
        assert (dataset_dir / "schema.json").exists()
        assert len(list((dataset_dir / "policies").glob("*.json"))) == 60
