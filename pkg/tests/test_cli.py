import json
import subprocess
import sys

import pytest

from ellsurf.cli import EXIT_BUDGET, EXIT_MISMATCH, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_catalog(capsys):
    code, doc = run(capsys, "catalog")
    assert code == 0 and doc["schema_version"] == 1
    assert len(doc["surfaces"]) == 11
    assert {r["id"] for r in doc["surfaces"]} >= {"6,5", "9,1", "11,1"}


@pytest.mark.parametrize("name, euler", [("6,5", 24), ("10,3", 36)])
def test_analyze(capsys, name, euler):
    code, doc = run(capsys, "analyze", name)
    assert code == 0 and doc["matches_table"]
    assert doc["analysis"]["euler_total"] == euler


def test_unknown_surface_is_usage_error(capsys):
    with pytest.raises(SystemExit) as ei:
        main(["analyze", "4,4"])
    assert ei.value.code == 2


def test_bad_prime_is_usage_error(capsys, count_cache):
    with pytest.raises(SystemExit) as ei:
        main(["frobenius", "9,1", "-p", "3", "--cache-dir", count_cache])
    assert ei.value.code == 2


@pytest.mark.parametrize("name, p", [("9,1", 5), ("9,2", 13)])
def test_frobenius(capsys, count_cache, name, p, tmp_path):
    out = tmp_path / "f.json"
    code, doc = run(capsys, "frobenius", name, "-p", str(p), "--cache-dir", count_cache,
                    "--json-out", str(out))
    assert code == 0
    row = doc["results"][0]
    assert row["matches_reference"] and row["p"] == p
    assert json.loads(out.read_text()) == doc
    # second run is served from the cache
    code, doc = run(capsys, "frobenius", name, "-p", str(p), "--cache-dir", count_cache)
    assert doc["results"][0]["counted_this_run"] == []


def test_frobenius_budget(capsys, tmp_path):
    code = main(["frobenius", "9,2", "-p", "13", "--cache-dir", str(tmp_path),
                 "--time-budget", "0"])
    assert code == EXIT_BUDGET


def test_picard(capsys, count_cache):
    code, doc = run(capsys, "picard", "12,1", "--cache-dir", count_cache)
    assert code == 0 and doc["rho"] == 19


def test_pair(capsys):
    code, doc = run(capsys, "pair", "6,5", "--T0", "2", "--bound", "200")
    assert code == 0 and doc["N"] == 6
    assert doc["disc_ratio_class"] == "1"
    assert len(doc["E1"]) == 5 and len(doc["E2"]) == 5


def test_pair_rejects_unknown_case():
    with pytest.raises(SystemExit) as ei:
        main(["pair", "7,1", "--T0", "2"])
    assert ei.value.code == 2


def test_verify_tables(capsys, count_cache):
    code, doc = run(capsys, "verify-tables", "--scope", "tables-12", "--cache-dir", count_cache)
    assert code == 0 and doc["ok"]
    assert EXIT_MISMATCH == 1


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "ellsurf", "catalog"], capture_output=True,
                       text=True, timeout=120)
    assert r.returncode == 0 and json.loads(r.stdout)["command"] == "catalog"
