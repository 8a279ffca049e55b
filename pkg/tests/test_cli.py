"""
Tests for the command-line interface.
"""
import io
import json
from unittest.mock import patch

import pytest

from script.cli import build_parser, run, verify_suite
from script.config import DEFAULT_CONFIG
from script.tiles import metallic_tiles


def invoke(*argv):
    out = io.StringIO()
    code = run(list(argv), config=DEFAULT_CONFIG, stdout=out)
    return code, out.getvalue()


def test_parser_requires_a_command():
    """Test that argparse errors come back as exit code 2."""
    assert invoke()[0] == 2
    assert invoke("tiles")[0] == 2
    assert invoke("tiles", "--n", "0")[0] == 2
    assert build_parser().parse_args(["tiles", "--n", "2"]).kind == "base"


def test_version_flag(capsys):
    """Test --version prints the version and exits cleanly."""
    assert invoke("--version")[0] == 0
    assert "metallic-tiler" in capsys.readouterr().out


def test_tiles_json_and_tsv():
    """Test the tile listing in both text formats."""
    code, out = invoke("tiles", "--n", "2")
    assert code == 0
    doc = json.loads(out)
    assert doc["count"] == 25
    code, out = invoke("tiles", "--n", "2", "--set", "extended", "--format", "tsv")
    assert code == 0
    assert len(out.splitlines()) == 1 + 4 + 16 + 13


def test_tiles_svg_to_file(tmp_path):
    """Test writing a figure with --out."""
    target = tmp_path / "t.svg"
    code, out = invoke("tiles", "--n", "1", "--format", "svg", "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text(encoding="utf-8").startswith("<svg")


def test_png_needs_out():
    """Test that PNG output without --out is a usage error."""
    assert invoke("tiles", "--n", "1", "--format", "png")[0] == 2


def test_verify_passes_for_small_n():
    """Test the identity suite and its JSON report."""
    code, out = invoke("verify", "--n", "1", "--samples", "20")
    assert code == 0
    assert "FAIL" not in out
    code, out = invoke("verify", "--n", "2", "--samples", "10", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["passed"]
    assert doc["kind"] == "verify"


def test_verify_suite_names():
    """Test that the suite covers the tile, coding and partition checks."""
    results = verify_suite(1, samples=5)
    assert all(results.values())
    assert {"chip equals extended", "witness points", "lambda factorization"} <= set(results)


def test_verify_reports_failures():
    """Test exit code 1 when a check fails."""
    with patch("script.cli.range_check", return_value=False):
        code, out = invoke("verify", "--n", "1", "--samples", "5")
    assert code == 1
    assert "witness points" in out and "FAIL" in out


def test_window_and_check_round_trip(tmp_path):
    """Test writing a window document and validating it."""
    target = tmp_path / "w.json"
    code, _ = invoke("window", "--n", "3", "--x", "1/3", "--y", "2/7", "--width", "6", "--height", "5",
                     "--out", str(target))
    assert code == 0
    code, out = invoke("check", str(target))
    assert code == 0 and "valid 6x5 window" in out

    doc = json.loads(target.read_text(encoding="utf-8"))
    ts = metallic_tiles(3)
    original = ts[doc["cells"][0][0]]
    doc["cells"][0][0] = next(k for k, t in enumerate(ts) if t.right != original.right)
    target.write_text(json.dumps(doc), encoding="utf-8")
    code, out = invoke("check", str(target))
    assert code == 1 and out


def test_check_rejects_non_documents(tmp_path):
    """Test exit code 1 for unreadable input."""
    bad = tmp_path / "bad.json"
    bad.write_text("[]", encoding="utf-8")
    assert invoke("check", str(bad))[0] == 1
    assert invoke("check", str(tmp_path / "missing.json"))[0] == 1


def test_window_rejects_bad_coordinates():
    """Test usage errors for unparsable coordinates."""
    assert invoke("window", "--n", "2", "--x", "one", "--y", "0")[0] == 2


def test_average_output():
    """Test the single estimate and the CSV table."""
    code, out = invoke("average", "--n", "2", "--x", "1/3", "--y", "1/4", "--k", "500")
    assert code == 0 and out.startswith("axis=row k=500")
    code, out = invoke("average", "--n", "2", "--x", "1/3", "--y", "1/4", "--k", "300", "--axis", "col", "--csv")
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "k,value,target,error"
    assert [line.split(",")[0] for line in lines[1:]] == ["100", "300"]


def test_partition_json():
    """Test the partition document from the command line."""
    code, out = invoke("partition", "--n", "1", "--which", "west")
    assert code == 0
    doc = json.loads(out)
    assert doc["name"] == "west"


def test_locate_contains_point():
    """Test that locate reports a box around the point."""
    code, out = invoke("locate", "--n", "2", "--x", "2/5", "--y", "1/9", "--size", "3")
    assert code == 0
    assert out.startswith("x in [")


def test_selfsim_text_and_usage():
    """Test the substitution listing and the n = 3 restriction of --match-published."""
    code, out = invoke("selfsim", "--n", "1")
    assert code == 0
    assert "0 ↦" in out
    assert invoke("selfsim", "--n", "2", "--match-published")[0] == 2


def test_selfsim_match_published(selfsim3):
    """Test the published-table comparison and the spectral check for n = 3."""
    code, out = invoke("selfsim", "--n", "3", "--match-published", "--spectral", "--format", "json")
    assert code == 0
    assert "label bijection" in out
    assert "spectral: divisible=True" in out


def test_selfsim_match_paper_spelling(selfsim3):
    """Test that --match-paper and --match-published are the same flag."""
    parser = build_parser()
    assert parser.parse_args(["selfsim", "--n", "3", "--match-paper"]).match_published
    assert parser.parse_args(["selfsim", "--n", "3", "--match-published"]).match_published
    code, out = invoke("selfsim", "--n", "3", "--match-paper")
    assert code == 0
    assert "label bijection" in out
    assert invoke("selfsim", "--n", "2", "--match-paper")[0] == 2


def test_unexpected_errors_exit_1():
    """Test that unexpected exceptions are logged and mapped to 1."""
    with patch("script.cli.tileset", side_effect=RuntimeError("boom")):
        assert invoke("tiles", "--n", "1")[0] == 1


def test_config_flag_overrides_passed_config(tmp_path):
    """Test that --config wins over the configuration handed to run()."""
    path = tmp_path / "cfg.json"
    path.write_text('{"averages": {"horizons": [50]}}', encoding="utf-8")
    out = io.StringIO()
    code = run(["--config", str(path), "average", "--n", "1", "--x", "1/2", "--y", "1/3", "--k", "80", "--csv"],
               config=DEFAULT_CONFIG, stdout=out)
    assert code == 0
    assert [line.split(",")[0] for line in out.getvalue().splitlines()[1:]] == ["50", "80"]
