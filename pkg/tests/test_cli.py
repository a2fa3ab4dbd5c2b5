import json
import logging
import shutil
import subprocess
import sys

import numpy as np
import pytest

from corpus import ROOT
from autl import cli
from autl.cache import AutCache
from autl.config import RunConfig
from autl.constructions import builtin
from autl.groupfile import (
    GroupFileError,
    group_from_document,
    group_to_document,
    load_corpus_dir,
    load_groups,
    normalise_identity,
)
from autl.theorems import census

EXAMPLES = ROOT / "groupfiles" / "examples"

LOOP5 = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# --- GroupFile ingestion ----------------------------------------------------

def test_example_files_load():
    q8 = load_groups(EXAMPLES / "q8_permutation.json")[0]
    assert q8.order == 8 and int(np.sum(q8.elem_order == 2)) == 1
    s3 = load_groups(EXAMPLES / "s3_cayley_reindexed.json")[0]
    assert s3.order == 6 and not s3.is_abelian
    assert [G.order for G in load_groups(EXAMPLES / "small_abelian.jsonl")] == [2, 4, 4]


def test_identity_normalisation():
    t = np.array([[1, 2, 0], [2, 0, 1], [0, 1, 2]])  # C3 with identity at index 2
    n = normalise_identity(t)
    assert np.array_equal(n[0], np.arange(3)) and np.array_equal(n[:, 0], np.arange(3))
    with pytest.raises(GroupFileError):
        normalise_identity(np.array([[1, 0], [0, 0]]))


def test_round_trip_document():
    G = builtin("D8")
    H = group_from_document(group_to_document(G))
    assert np.array_equal(G.table, H.table)
    assert H.digest == G.digest


@pytest.mark.parametrize("doc", [
    [], {"name": "x"}, {"name": "x", "representation": {"kind": "matrix"}},
    {"name": "x", "representation": {"kind": "cayley", "order": 2, "table": [[0, 1]]}},
    {"name": "x", "representation": {"kind": "cayley", "order": 2, "table": [[0, 1], [1, 2]]}},
    {"name": "x", "representation": {"kind": "cayley", "order": 5, "table": LOOP5}},
    {"name": "x", "representation": {"kind": "permutation", "degree": 3, "generators": [[0, 0, 1]]}},
])
def test_bad_documents(doc):
    with pytest.raises(GroupFileError):
        group_from_document(doc)


def test_corpus_dir_skips_bad_entries(tmp_path):
    shutil.copy(EXAMPLES / "small_abelian.jsonl", tmp_path)
    (tmp_path / "broken.json").write_text(json.dumps(
        {"name": "loop5", "representation": {"kind": "cayley", "order": 5, "table": LOOP5}}))
    (tmp_path / "garbage.json").write_text("{not json")
    groups, skipped = load_corpus_dir(tmp_path)
    assert [G.label for G in groups] == ["C2", "C4", "C2xC2"]
    assert sorted(s.source.rsplit("/", 1)[-1] for s in skipped) == ["broken.json", "garbage.json"]


# --- commands and exit codes ------------------------------------------------

def test_verify_builtin(capsys):
    code, out, _ = run(capsys, "verify", "--builtin", "Q8", "--jobs", "1")
    assert code == 0
    doc = json.loads(out)
    assert doc["reports"][0]["autl_order"] == 4 and doc["reports"][0]["order_L"] == 2


def test_verify_file(capsys):
    code, out, _ = run(capsys, "verify", "--file", str(EXAMPLES / "q8_permutation.json"), "--format", "csv")
    assert code == 0 and out.startswith("# autl-report/1 columns:")


def test_verify_multi_group_file_rejected(capsys):
    code, _, err = run(capsys, "verify", "--file", str(EXAMPLES / "small_abelian.jsonl"))
    assert code == 2 and "exactly one group" in err


def test_verify_malformed_file(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "verify", "--file", str(bad))
    assert code == 2 and "invalid JSON" in err
    code, _, _ = run(capsys, "verify", "--file", str(tmp_path / "missing.json"))
    assert code == 2


def test_verify_unknown_builtin(capsys):
    code, _, _ = run(capsys, "verify", "--builtin", "nonsense")
    assert code == 2


def test_verify_order_limit(capsys):
    code, _, err = run(capsys, "verify", "--builtin", "D16", "--max-order", "8")
    assert code == 2 and "exceeds" in err


def test_aut_cap_exit_code(capsys):
    code, _, err = run(capsys, "aut", "--builtin", "C2xC2xC2xC2", "--aut-cap", "100")
    assert code == 3 and "EnumerationCapExceeded" in err
    code, _, _ = run(capsys, "verify", "--builtin", "C2xC2xC2xC2", "--aut-cap", "100")
    assert code == 3


def test_aut_output(capsys):
    code, out, _ = run(capsys, "aut", "--builtin", "D8")
    assert code == 0
    data = json.loads(out)
    assert (data["aut_order"], data["inn_order"], data["autl_order"]) == (8, 4, 4)
    code, out, _ = run(capsys, "aut", "--builtin", "heisenberg3", "--format", "markdown")
    assert code == 0 and "| autl_order | 1 |" in out


def test_census_corpus_dir(tmp_path, capsys):
    shutil.copy(EXAMPLES / "q8_permutation.json", tmp_path)
    (tmp_path / "loop.json").write_text(json.dumps(
        {"name": "loop5", "representation": {"kind": "cayley", "order": 5, "table": LOOP5}}))
    code, out, err = run(capsys, "census", "--corpus-dir", str(tmp_path), "--jobs", "1")
    assert code == 0
    doc = json.loads(out)
    assert [r["label"] for r in doc["reports"]] == ["Q8"]
    assert len(doc["skipped"]) == 1 and "skipped" in err


def test_census_empty_dir(tmp_path, capsys):
    code, out, _ = run(capsys, "census", "--corpus-dir", str(tmp_path), "--jobs", "1", "--format", "markdown")
    assert code == 0 and "Groups: 0" in out


def test_census_output_file(tmp_path, capsys):
    dest = tmp_path / "out.csv"
    code, out, _ = run(capsys, "census", "--builtin", "--max-order", "8", "--jobs", "1",
                       "--format", "csv", "-o", str(dest))
    assert code == 0 and out == ""
    text = dest.read_text()
    assert "# summary columns:" in text and "Thm3.4,2,0" in text


def test_bad_flag_values(capsys):
    code, _, _ = run(capsys, "census", "--jobs", "0")
    assert code == 2
    with pytest.raises(SystemExit):
        cli.main(["census", "--format", "yaml"])


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "autl.cli", "aut", "--builtin", "Q8"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["aut_order"] == 24


# --- determinism and caching ------------------------------------------------

@pytest.mark.parametrize("fmt", ["json", "csv", "markdown"])
def test_reports_byte_identical_across_jobs(capsys, fmt):
    outs = []
    for jobs in ("1", "8"):
        code, out, _ = run(capsys, "census", "--builtin", "--max-order", "32", "--jobs", jobs, "--format", fmt)
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1]


def test_warm_cache_identical(tmp_path, capsys):
    args = ["census", "--builtin", "--max-order", "27", "--jobs", "1", "--cache-dir", str(tmp_path)]
    _, cold, _ = run(capsys, *args)
    files = sorted(p.name for p in tmp_path.iterdir())
    assert files and all(f.startswith("aut-") and f.endswith(".npz") for f in files)
    _, warm, _ = run(capsys, *args)
    assert cold == warm
    cache = AutCache(tmp_path)
    G = builtin("Q8")
    cache.get_or_compute(G, lambda _: pytest.fail("should have been served from the cache"))
    assert cache.hits == 1


def test_no_cache_dir_no_files(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    code, _, _ = run(capsys, "verify", "--builtin", "Q8")
    assert code == 0 and list(tmp_path.iterdir()) == []


def test_corrupt_cache_recomputed(tmp_path, caplog):
    cfg = RunConfig(parallelism_degree=1, cache_dir=str(tmp_path))
    G = builtin("D8")
    first = census([G], cfg).reports
    (entry,) = tmp_path.iterdir()
    entry.write_bytes(b"garbage" + entry.read_bytes()[7:])
    with caplog.at_level(logging.WARNING):
        second = census([G], cfg).reports
    assert "corrupt cache entry" in caplog.text
    assert first == second
    assert entry.exists()  # rewritten after recomputation


def test_tampered_cache_rows_rejected(tmp_path, caplog):
    cache = AutCache(tmp_path)
    G = builtin("Q8")
    from autl.automorphisms import automorphism_group
    A = automorphism_group(G)
    cache.store(A)
    path = cache.path_for(G)
    with np.load(path) as data:
        images = np.array(data["images"])
    images[1] = images[0]
    np.savez(path, version=np.int64(1), images=images, checksum=np.array("0" * 64))
    with caplog.at_level(logging.WARNING):
        assert cache.load(G) is None
    assert not path.exists()
