#!/usr/bin/env python3
"""
Pruebas de la línea de comandos: códigos de salida y reporte JSON en stdout
"""
import orjson
import pytest

from gpdkit.main_app import main


def _run(capsys, *argv):
    code = main(["--quiet", *map(str, argv)])
    out = capsys.readouterr().out
    return code, orjson.loads(out)


def _names(report):
    return {c["check"] for c in report["checks"]}


@pytest.fixture
def swap(fixtures_dir):
    return fixtures_dir / "swap.gpd"


@pytest.fixture(scope="module")
def s4_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("s4") / "s4.gpd"
    assert main(["--quiet", "example", "s4", "--emit", str(path)]) == 0
    return path


def test_check_fixture(capsys, swap):
    code, report = _run(capsys, "check", swap)
    assert code == 0
    assert report["ok"]
    assert report["command"] == "check"
    assert len(report["input_digest"]) == 32
    assert report["data"]["CP2.saturated"] is True
    assert "P2.associativity" in _names(report)
    assert "swap.L1" in _names(report)


def test_check_s4_example(capsys, s4_file):
    code, report = _run(capsys, "check", s4_file)
    assert code == 0
    assert all(c["status"] != "fail" for c in report["checks"])


def test_equiv_s4(capsys, s4_file):
    code, report = _run(capsys, "equiv", s4_file, "s4")
    assert code == 0
    data = report["data"]
    assert data["A"]["block_dims"] == [24]
    assert data["C"]["block_dims"] == [3]
    assert "equivalence.principal-r-fibers-are-orbits" in _names(report)
    assert "algebra.morita-compatible" in _names(report)


def test_mutated_document_fails(capsys, swap, tmp_path):
    broken = tmp_path / "broken.gpd"
    broken.write_text(swap.read_text(encoding="utf-8").replace("restr 1 p0_1 = 1", "restr 1 p0_1 = 0"),
                      encoding="utf-8")
    code, report = _run(capsys, "check", broken)
    assert code == 1
    assert not report["ok"]
    failed = [c for c in report["checks"] if c["status"] == "fail"]
    assert failed and failed[0]["check"].startswith("swap.")


def test_quotient(capsys, swap):
    code, report = _run(capsys, "quotient", swap, "swap")
    assert code == 0
    assert report["data"]["freeness"]["free"] is True
    assert report["data"]["orbit_groupoid"]["size"] == 2
    assert report["data"]["orbit_groupoid"]["units"] == 1


def test_product(capsys, swap):
    code, report = _run(capsys, "product", swap, "swap")
    assert code == 0
    assert report["data"]["product"]["size"] == 8
    assert "matched-lift.lift-isomorphism" in _names(report)


def test_fell_one_sided(capsys, swap):
    code, report = _run(capsys, "fell", swap, "swapB")
    assert code == 0
    assert report["data"]["C"]["size"] == 2
    assert "bimodule.FE1-commutation" in _names(report)


def test_algebra(capsys, swap):
    code, report = _run(capsys, "algebra", swap, "P2")
    assert code == 0
    assert report["data"]["summary"]["block_dims"] == [2]
    code, report = _run(capsys, "algebra", swap, "Z2")
    assert code == 0
    assert not report["data"]["summary"]["principal"]
    assert {c["check"]: c["status"] for c in report["checks"]}["matrix-units.matrix-units"] == "skipped"


def test_dr(capsys, fixtures_dir):
    code, report = _run(capsys, "dr", fixtures_dir / "z6.gpd", "z6")
    assert code == 0
    assert report["data"]["groupoid"]["window"] == 2
    assert report["data"]["groupoid"]["closed"] is False
    assert report["data"]["freeness"]["period"] == 2


def test_example_without_emit(capsys):
    code, report = _run(capsys, "example", "z6")
    assert code == 0
    assert report["data"]["document"].startswith("[dr-system z6]")
    assert report["data"]["blocks"] == [{"kind": "dr-system", "name": "z6"}]


@pytest.mark.parametrize("argv", [
    ("example", "nada"),
    ("quotient", "fixtures/swap.gpd", "nada"),
    ("algebra", "fixtures/swap.gpd", "swap"),
    ("check", "no/existe.gpd"),
], ids=["unknown-example", "unknown-block", "wrong-kind", "missing-file"])
def test_usage_errors(capsys, monkeypatch, fixtures_dir, argv):
    monkeypatch.chdir(fixtures_dir.parent)
    code, report = _run(capsys, *argv)
    assert code == 2
    assert report["data"]["error"]["type"] == "UsageError"


def test_syntax_error_report(capsys, tmp_path):
    bad = tmp_path / "bad.gpd"
    bad.write_text("[groupoid A]\nelements = a\nsrc a a\n", encoding="utf-8")
    code, report = _run(capsys, "check", bad)
    assert code == 2
    error = report["data"]["error"]
    assert error["kind"] == "syntax"
    assert error["line"] == 3


def test_bad_arguments():
    assert main([]) == 2
    assert main(["--threads", "0", "example", "z6"]) == 2
