import json

import pytest

import config
from main import main

SMALL = ["--n-speakers", "3", "--train-s", "8", "--n-test", "2", "--test-s", "1.5", "--seed", "11"]


@pytest.fixture(autouse=True)
def output_dirs(tmp_path, monkeypatch):
    monkeypatch.setattr(config, "LOG_DIR", str(tmp_path / "logs"))
    monkeypatch.setattr(config, "OUTPUT_DIR", str(tmp_path / "output"))


@pytest.fixture
def corpus(tmp_path):
    out_dir = tmp_path / "corpus"
    assert main(["synth", "--out", str(out_dir)] + SMALL) == 0
    return out_dir


@pytest.fixture
def models(corpus, tmp_path):
    out_dir = tmp_path / "models"
    assert main(["enroll", str(corpus / "manifest.csv"), "--method", "vqcm", "--bits", "1", "--p2", "10",
                 "--out", str(out_dir)]) == 0
    return out_dir


def test_synth_writes_manifest(corpus):
    assert (corpus / "manifest.csv").exists()
    assert (corpus / "spk02" / "test_02.wav").exists()
    metadata = json.loads((corpus / "run_metadata.json").read_text(encoding="utf-8"))
    assert metadata["command"] == "synth"
    assert metadata["entries"] == 9


def test_enroll_reports_parameter_counts(corpus, tmp_path, capsys):
    out_dir = tmp_path / "models"
    assert main(["enroll", str(corpus / "manifest.csv"), "--bits", "1", "--p2", "10", "--out", str(out_dir)]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert [line.split("\t")[:2] for line in lines] == [[f"spk0{i}", "142 параметров"] for i in range(3)]
    assert sorted(p.name for p in out_dir.glob("*.vqcm.json")) == [f"spk0{i}.vqcm.json" for i in range(3)]


def test_enroll_vq(corpus, tmp_path, capsys):
    assert main(["enroll", str(corpus / "manifest.csv"), "--method", "vq", "--bits", "6",
                 "--out", str(tmp_path / "vq")]) == 0
    assert "1024 параметров" in capsys.readouterr().out


def test_enroll_without_train_split_fails(corpus, tmp_path, capsys):
    manifest = corpus / "manifest.csv"
    rows = manifest.read_text(encoding="utf-8").splitlines()
    kept = [row for row in rows if not row.startswith("spk01,spk01/train")]
    partial = corpus / "partial.csv"
    partial.write_text("\n".join(kept) + "\n", encoding="utf-8")

    assert main(["enroll", str(partial), "--out", str(tmp_path / "m")]) == 1
    assert "spk01" in capsys.readouterr().err


def test_identify_own_training_file(models, corpus, capsys):
    assert main(["identify", str(models), str(corpus / "spk01" / "train_00.wav")]) == 0
    top = [line for line in capsys.readouterr().out.splitlines() if line.startswith("*")]
    assert top[0].split()[2] == "spk01"


def test_identify_csv_output(models, corpus, capsys):
    audio = str(corpus / "spk02" / "train_00.wav")
    assert main(["identify", str(models), audio, "--scheme", "vq", "--csv"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "rank,speaker_id,score,votes"
    assert len(lines) == 4
    assert lines[1].split(",")[:2] == ["1", "spk02"]


def test_identify_noisy_is_reproducible(models, corpus, capsys):
    args = ["identify", str(models), str(corpus / "spk00" / "test_01.wav"), "--snr", "15", "--noise-seed", "7",
            "--csv"]
    assert main(args) == 0
    first = capsys.readouterr().out
    assert main(args) == 0
    assert capsys.readouterr().out == first


def test_identify_unknown_scheme(models, corpus):
    assert main(["identify", str(models), str(corpus / "spk00" / "test_01.wav"), "--scheme", "best"]) == 1


def test_identify_empty_model_dir(corpus, tmp_path):
    empty = tmp_path / "empty"
    empty.mkdir()
    assert main(["identify", str(empty), str(corpus / "spk00" / "test_01.wav")]) == 1


def test_evaluate_parameter_counts(corpus, tmp_path):
    out_dir = tmp_path / "report"
    assert main(["evaluate", str(corpus / "manifest.csv"), "--methods", "vq,cm,vqcm", "--snr", "inf",
                 "--out", str(out_dir)]) == 0
    metadata = json.loads((out_dir / "run_metadata.json").read_text(encoding="utf-8"))
    assert sorted(metadata["parameter_counts"].values()) == [32, 55, 64, 142, 210, 284, 1024]
    assert metadata["failures"] == 0
    assert (out_dir / "snr_grid.txt").exists()


def test_evaluate_unknown_method(corpus, tmp_path):
    assert main(["evaluate", str(corpus / "manifest.csv"), "--methods", "gmm", "--out", str(tmp_path / "r")]) == 1


def test_identify_rejects_undefined_snr(models, corpus):
    audio = str(corpus / "spk00" / "test_01.wav")
    assert main(["identify", str(models), audio, "--snr=-inf"]) == 1
    assert main(["identify", str(models), audio, "--snr", "nan"]) == 1


@pytest.mark.parametrize("raw", ["", "15,20", "abc"])
def test_identify_snr_usage_error(models, corpus, raw, capsys):
    with pytest.raises(SystemExit) as exit_info:
        main(["identify", str(models), str(corpus / "spk00" / "test_01.wav"), "--snr", raw])
    assert exit_info.value.code == 2
    assert "--snr" in capsys.readouterr().err


def test_evaluate_rejects_undefined_snr(corpus, tmp_path):
    assert main(["evaluate", str(corpus / "manifest.csv"), "--methods", "vqcm", "--snr", "inf,-inf",
                 "--out", str(tmp_path / "r")]) == 1
