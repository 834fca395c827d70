import pytest

from corpus.manifest import check_runnable, read_manifest, write_manifest
from database.models import CorpusManifest, ManifestEntry
from utils.errors import ManifestError


def test_relative_paths_resolved_from_manifest_dir(tmp_path):
    path = tmp_path / "manifest.csv"
    path.write_text("speaker_id,path,split,format\nspk00,spk00/train_00.wav,train,wav\n", encoding="utf-8")
    manifest = read_manifest(path)
    assert manifest.entries[0].path == str(tmp_path / "spk00" / "train_00.wav")


def test_write_then_read(tmp_path):
    manifest = CorpusManifest([
        ManifestEntry("a", str(tmp_path / "a" / "train.wav"), "train", "wav"),
        ManifestEntry("a", str(tmp_path / "a" / "test.alaw"), "test", "alaw"),
    ])
    path = tmp_path / "manifest.csv"
    write_manifest(manifest, path)
    assert "a/train.wav" in path.read_text(encoding="utf-8")
    assert read_manifest(path).entries == manifest.entries


@pytest.mark.parametrize("content", [
    "speaker,path,split,format\n",
    "speaker_id,path,split,format\na,x.wav,dev,wav\n",
    "speaker_id,path,split,format\na,x.mp3,test,mp3\n",
])
def test_invalid_manifest(tmp_path, content):
    path = tmp_path / "manifest.csv"
    path.write_text(content, encoding="utf-8")
    with pytest.raises(ManifestError):
        read_manifest(path)


def test_missing_manifest(tmp_path):
    with pytest.raises(ManifestError):
        read_manifest(tmp_path / "absent.csv")


def test_check_runnable():
    manifest = CorpusManifest([
        ManifestEntry("a", "a1", "train"),
        ManifestEntry("a", "a2", "test"),
        ManifestEntry("b", "b1", "train"),
    ])
    assert check_runnable(manifest) == ["b"]
    assert manifest.speakers == ["a", "b"]
    assert [e.path for e in manifest.split_entries("train")] == ["a1", "b1"]
