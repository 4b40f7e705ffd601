"""The lodsim command line interface."""

from __future__ import annotations

import json
import shutil
import socket
import subprocess
import sys
import time

import pytest

from lodsim.cli import main
from lodsim.ranking import load_cache

from conftest import FIXTURES, LABELS_NT, MOVIES_NT
from stub_endpoint import StubSparqlServer

DVC = "http://ex/DaVinciCode"
ILL = "http://ex/Illuminati"
STAMP = "2026-02-03T04:05:06+00:00"


def run(argv, capsys):
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    out, err = capsys.readouterr()
    return code, out, err


def test_validate_clean_file(capsys):
    code, out, err = run(["validate", str(MOVIES_NT)], capsys)
    assert code == 0
    assert out == "51 triples\n"
    assert err == ""


def test_validate_json(capsys):
    code, out, _ = run(["validate", "--format", "json", str(MOVIES_NT), str(LABELS_NT)], capsys)
    assert code == 0
    body = json.loads(out)
    assert body["triples"] == 79
    assert [f["triples"] for f in body["files"]] == [51, 28]
    assert all(f["diagnostics"] == [] for f in body["files"])


def test_validate_dirty_file(tmp_path, capsys):
    dirty = tmp_path / "dirty.nt"
    dirty.write_text(
        '<http://ex/a> <http://ex/p> <http://ex/b> .\n'
        'this is not a triple\n'
        '<http://ex/c> <http://ex/p> "ok" .\n'
    )
    code, out, err = run(["validate", str(dirty)], capsys)
    assert code == 2
    assert out == "2 triples\n"
    assert f"{dirty}:2:" in err


def test_dist_table(capsys):
    code, out, err = run(["dist", "--kb", str(MOVIES_NT), "--uri", DVC, "-k", "3"], capsys)
    assert code == 0
    rows = out.splitlines()
    assert len(rows) == 17
    assert rows[0].split("\t")[0] == "1"
    assert "17 nodes within 3 steps" in err


def test_dist_json_shape(capsys):
    code, out, _ = run(
        ["dist", "--kb", str(MOVIES_NT), "--uri", DVC, "-k", "1", "--format", "json"],
        capsys,
    )
    body = json.loads(out)
    assert body["count"] == 7
    assert body["directions"] == ["ResFrom", "Classes", "SuperClasses"]
    assert body["prefixMode"] == "plain"
    assert {"node": "http://ex/Film", "distance": 1} in body["nodes"]


def test_dist_direction_and_mode_flags(capsys):
    code, out, _ = run(
        ["dist", "--kb", str(MOVIES_NT), "--uri", DVC, "-k", "1", "--directions", "rf"],
        capsys,
    )
    assert code == 0 and len(out.splitlines()) == 6
    code, out, _ = run(
        ["dist", "--kb", str(MOVIES_NT), "--uri", DVC, "-k", "1",
         "--prefix-mode", "prefixed"],
        capsys,
    )
    assert code == 0 and len(out.splitlines()) == 7
    assert "http://ex/genre:http://ex/Mystery" in out


def test_sim_uniform_prints_integer_counts(capsys):
    code, out, _ = run(
        ["sim", "--kb", str(MOVIES_NT), "--a", DVC, "--b", ILL,
         "--weighting", "uniform", "--format", "json"],
        capsys,
    )
    assert code == 0
    body = json.loads(out)
    assert body["numerator"] == 13 and isinstance(body["numerator"], int)
    assert body["denominator"] == 21 and isinstance(body["denominator"], int)
    assert body["value"] == 13 / 21
    assert body["intersectionSize"] == 13
    assert body["unionSize"] == 21


def test_sim_weighted_half_units(capsys):
    _, out, _ = run(
        ["sim", "--kb", str(MOVIES_NT), "--a", DVC, "--b", ILL, "--format", "json"],
        capsys,
    )
    body = json.loads(out)
    assert body["numerator"] == 29.5
    assert body["denominator"] == 40.5
    assert body["k"] == 3 and body["weighting"] == "weighted"


def test_sim_identity(capsys):
    _, out, _ = run(
        ["sim", "--kb", str(MOVIES_NT), "--a", DVC, "--b", DVC, "--format", "json"],
        capsys,
    )
    assert json.loads(out)["value"] == 1.0


def test_sim_table_rows(capsys):
    _, out, _ = run(
        ["sim", "--kb", str(MOVIES_NT), "--a", DVC, "--b", ILL,
         "--weighting", "uniform", "-k", "1"],
        capsys,
    )
    table = dict(line.split("\t") for line in out.splitlines())
    assert set(table) == {"value", "numerator", "denominator", "intersectionSize", "unionSize"}
    assert table["numerator"] == "4"


def test_prefix_registration(capsys):
    code, out, _ = run(
        ["sim", "--kb", str(MOVIES_NT), "--prefix", "ex=http://ex/",
         "--a", "ex:DaVinciCode", "--b", "ex:Illuminati", "--format", "json"],
        capsys,
    )
    assert code == 0
    body = json.loads(out)
    assert body["a"] == DVC and body["b"] == ILL


def test_unregistered_prefix_fails(capsys):
    code, _, err = run(
        ["sim", "--kb", str(MOVIES_NT), "--a", "DaVinciCode", "--b", ILL], capsys
    )
    assert code == 1
    assert "not an absolute IRI" in err
    code, _, err = run(
        ["sim", "--kb", str(MOVIES_NT), "--prefix", "broken", "--a", DVC, "--b", ILL],
        capsys,
    )
    assert code == 1 and "name=base" in err


def test_candidates_default_mode(capsys):
    code, out, err = run(
        ["candidates", "--kb", str(MOVIES_NT), "--uri", DVC, "-k", "1"], capsys
    )
    assert code == 0
    assert out.splitlines() == [f"complete\t{ILL}", "complete\thttp://ex/SherlockHolmes"]
    assert "2 candidates" in err


def test_candidates_sets_views(capsys):
    _, out, _ = run(
        ["candidates", "--kb", str(MOVIES_NT), "--uri", DVC, "--sets", "all"], capsys
    )
    assert out.splitlines() == [
        f"rf&cl\t{ILL}", "rf&cl\thttp://ex/SherlockHolmes",
    ]
    _, out, _ = run(
        ["candidates", "--kb", str(MOVIES_NT), "--uri", DVC, "--sets", "rf,sp",
         "--format", "json"],
        capsys,
    )
    body = json.loads(out)
    assert [s["label"] for s in body["sets"]] == ["rf", "sp"]
    assert body["sets"][1]["members"] == []
    _, out, _ = run(
        ["candidates", "--kb", str(MOVIES_NT), "--uri", DVC, "--sets", "pairs",
         "--format", "json"],
        capsys,
    )
    assert [s["label"] for s in json.loads(out)["sets"]] == ["rf&cl", "rf&sp", "cl&sp"]


def test_top_table_and_json(capsys):
    code, out, _ = run(
        ["top", "--kb", str(MOVIES_NT), "--uri", DVC, "-k", "3", "-L", "2"], capsys
    )
    assert code == 0
    rows = [line.split("\t") for line in out.splitlines()]
    assert [r[1] for r in rows] == [ILL, "http://ex/SherlockHolmes"]
    assert rows[0][0] == "1" and rows[1][0] == "2"

    _, out, _ = run(
        ["top", "--kb", str(MOVIES_NT), "--uri", DVC, "-k", "3", "-L", "2",
         "--weighting", "uniform", "--format", "json"],
        capsys,
    )
    body = json.loads(out)
    assert body["entries"][0]["numerator"] == 13
    assert isinstance(body["entries"][0]["numerator"], int)
    assert body["method"] == "reversal"


def test_top_lattice_radius_guard(capsys):
    code, _, err = run(
        ["top", "--kb", str(MOVIES_NT), "--uri", DVC, "-k", "2", "--method", "lattice"],
        capsys,
    )
    assert code == 1
    assert "k = 1" in err


def test_precompute_round_trip(tmp_path, capsys):
    out_path = tmp_path / "films.jsonl"
    code, out, _ = run(
        ["precompute", "--kb", str(MOVIES_NT), "--classes", "http://ex/Film",
         "-k", "3", "-L", "2", "--out", str(out_path), "--created-at", STAMP],
        capsys,
    )
    assert code == 0
    assert out == f"3 records\t{out_path}\n"
    cache = load_cache(out_path)
    assert sorted(cache.records) == [DVC, ILL, "http://ex/SherlockHolmes"]
    assert cache.created_at == STAMP

    twin = tmp_path / "twin.jsonl"
    run(
        ["precompute", "--kb", str(MOVIES_NT), "--classes", "http://ex/Film",
         "-k", "3", "-L", "2", "--out", str(twin), "--created-at", STAMP,
         "--parallel", "3"],
        capsys,
    )
    assert out_path.read_bytes() == twin.read_bytes()


def test_precompute_all_classes(tmp_path, capsys):
    out_path = tmp_path / "all.jsonl"
    code, out, _ = run(
        ["precompute", "--kb", str(MOVIES_NT), "--classes", "all", "-k", "1",
         "-L", "1", "--out", str(out_path), "--format", "json"],
        capsys,
    )
    assert code == 0
    body = json.loads(out)
    assert body["records"] == 28
    assert body["L"] == 1


def test_genquery_prints_the_query(capsys):
    code, out, err = run(["genquery", "--uri", DVC, "--set", "rf"], capsys)
    assert code == 0
    golden = (FIXTURES.parent / "tests" / "goldens" / "rf.rq").read_text()
    assert out == golden
    assert err == ""
    code, out, _ = run(
        ["genquery", "--uri", DVC, "--set", "pair:rf,cl", "--format", "json"], capsys
    )
    body = json.loads(out)
    assert body["set"] == "pair:rf,cl"
    assert "rdf:type ?z" in body["text"]


def test_genquery_rejects_bad_input(capsys):
    code, _, err = run(["genquery", "--uri", "DaVinciCode", "--set", "rf"], capsys)
    assert code == 1 and "absolute IRI" in err
    code, _, err = run(["genquery", "--uri", DVC, "--set", "sideways"], capsys)
    assert code == 1 and "unknown set" in err


def test_genquery_exec_against_endpoint(movies_triples, capsys, monkeypatch):
    with StubSparqlServer(movies_triples) as stub:
        code, out, err = run(
            ["genquery", "--uri", DVC, "--set", "cl", "--exec",
             "--endpoint", stub.url],
            capsys,
        )
        assert code == 0
        assert out.splitlines() == [DVC, ILL, "http://ex/SherlockHolmes"]
        assert "rows=3" in err and "truncated=False" in err

        monkeypatch.setenv("LODSIM_ENDPOINT", stub.url)
        code, out, _ = run(
            ["genquery", "--uri", DVC, "--set", "cl", "--exec", "--format", "json"],
            capsys,
        )
        assert code == 0
        body = json.loads(out)
        assert body["results"] == [DVC, ILL, "http://ex/SherlockHolmes"]
        assert body["report"]["requests"] == 1


def test_genquery_exec_needs_an_endpoint(capsys, monkeypatch):
    monkeypatch.delenv("LODSIM_ENDPOINT", raising=False)
    code, _, err = run(["genquery", "--uri", DVC, "--set", "cl", "--exec"], capsys)
    assert code == 1
    assert "--endpoint" in err


def test_genquery_exec_endpoint_failure_exits_1(movies_triples, capsys):
    with StubSparqlServer(movies_triples, always_status=503) as stub:
        code, _, err = run(
            ["genquery", "--uri", DVC, "--set", "cl", "--exec", "--endpoint", stub.url],
            capsys,
        )
    assert code == 1
    assert "503" in err


def test_search_merges_kb_files(capsys):
    code, out, _ = run(
        ["search", "--kb", str(MOVIES_NT), "--kb", str(LABELS_NT), "--q", "hanks"],
        capsys,
    )
    assert code == 0
    assert out == "1\thttp://ex/TomHanks\n"
    _, out, _ = run(
        ["search", "--kb", str(LABELS_NT), "--q", "da vinci code", "--limit", "1",
         "--format", "json"],
        capsys,
    )
    body = json.loads(out)
    assert body["hits"] == [{"uri": DVC, "matches": 3}]


def test_usage_errors_exit_1(capsys):
    for argv in (
        [],
        ["frobnicate"],
        ["sim", "--kb", str(MOVIES_NT), "--a", DVC],  # missing --b
        ["dist", "--kb", str(MOVIES_NT), "--uri", DVC, "--no-such-flag"],
    ):
        code, _, err = run(argv, capsys)
        assert code == 1, argv
        assert "error" in err


def test_missing_kb_file_exits_2(tmp_path, capsys):
    code, _, err = run(
        ["dist", "--kb", str(tmp_path / "absent.nt"), "--uri", DVC], capsys
    )
    assert code == 2
    assert "error" in err


def test_negative_radius_exits_1(capsys):
    code, _, err = run(
        ["dist", "--kb", str(MOVIES_NT), "--uri", DVC, "-k", "-1"], capsys
    )
    assert code == 1


# --- installed entry point ------------------------------------------------

def test_console_script_smoke():
    exe = shutil.which("lodsim")
    assert exe, "console script not installed"
    proc = subprocess.run(
        [exe, "validate", str(MOVIES_NT)], capture_output=True, text=True, timeout=60
    )
    assert proc.returncode == 0
    assert proc.stdout == "51 triples\n"


def test_serve_integration():
    import requests

    probe = socket.socket()
    probe.bind(("127.0.0.1", 0))
    port = probe.getsockname()[1]
    probe.close()
    proc = subprocess.Popen(
        [sys.executable, "-m", "lodsim.cli", "serve", "--kb", str(MOVIES_NT),
         "--labels", str(LABELS_NT), "--port", str(port), "--default-L", "3"],
        stdout=subprocess.PIPE, stderr=subprocess.PIPE,
    )
    try:
        deadline = time.monotonic() + 30
        body = None
        while time.monotonic() < deadline:
            try:
                body = requests.get(
                    f"http://127.0.0.1:{port}/api/stats", timeout=1
                ).json()
                break
            except requests.RequestException:
                if proc.poll() is not None:
                    raise AssertionError(
                        f"server exited early: {proc.stderr.read().decode()}"
                    )
                time.sleep(0.2)
        assert body is not None, "server never answered"
        assert body["triples"] == 79 and body["cacheLoaded"] is False
        similar = requests.get(
            f"http://127.0.0.1:{port}/api/similar",
            params={"uri": DVC, "k": 1}, timeout=10,
        ).json()
        assert similar["L"] == 3  # --default-L reached the service
        assert similar["entries"][0]["uri"] == ILL
    finally:
        proc.terminate()
        proc.wait(timeout=10)
