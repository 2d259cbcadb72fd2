import json
import subprocess
import sys

from tilecolour import render_io
from tilecolour.cli import EXIT_FAIL, EXIT_LIMIT, EXIT_OK, EXIT_USAGE, certify, read_config, run_command
from tilecolour.colourers import Colouring


def test_generate_writes_patch_and_graph(tmp_path):
    out, gout = tmp_path / "c3.patch.json", tmp_path / "c3.graph.json"
    assert run_command(["generate", "--tiling", "chair", "--level", "3", "--out", str(out),
                        "--graph-out", str(gout)]) == EXIT_OK
    assert len(render_io.read(str(out)).tiles) == 64
    assert render_io.read(str(gout)).n_faces == 64


def test_color_verify_render_pipeline(tmp_path):
    p3 = tmp_path / "p3.patch.json"
    col = tmp_path / "p3.colouring.json"
    svg = tmp_path / "p3.svg"
    assert run_command(["generate", "--tiling", "pinwheel", "--level", "3", "--out", str(p3)]) == EXIT_OK
    assert run_command(["color", "--tiling", "pinwheel", "--mode", "edge", "--in", str(p3),
                        "--out", str(col), "--svg", str(svg)]) == EXIT_OK
    c = render_io.read(str(col))
    assert c.palette == 8 and c.target == "edge"
    assert svg.read_text().startswith("<?xml")
    report = tmp_path / "report.json"
    assert run_command(["verify", "--in", str(p3), "--colouring", str(col), "--out", str(report)]) == EXIT_OK
    assert json.loads(report.read_text())["proper"] is True
    assert run_command(["render", "--in", str(p3), "--colouring", str(col), "--svg", str(svg)]) == EXIT_OK


def test_improper_colouring_exits_1(tmp_path):
    p = tmp_path / "c.patch.json"
    run_command(["generate", "--tiling", "chair", "--level", "1", "--out", str(p)])
    bad = tmp_path / "bad.json"
    render_io.write(Colouring("face", (0, 0, 0, 0), 3), str(bad))
    assert run_command(["verify", "--in", str(p), "--colouring", str(bad), "--out", str(tmp_path / "r")]) == EXIT_FAIL


def test_oracle_colouring_and_certificate(tmp_path):
    out = tmp_path / "cert.json"
    assert run_command(["oracle", "--tiling", "rp", "--level", "2", "--mode", "vertex", "--out", str(out)]) == EXIT_OK
    cert = json.loads(out.read_text())
    assert cert["chi"] == 3 and len(cert["odd_cycle"]) % 2 == 1
    assert run_command(["color", "--tiling", "chair", "--level", "2", "--mode", "face",
                        "--algorithm", "oracle", "--out", str(tmp_path / "o.json")]) == EXIT_OK
    assert render_io.read(str(tmp_path / "o.json")).palette == 3


def test_usage_and_limit_exit_codes(tmp_path):
    assert run_command(["nonsense"]) == EXIT_USAGE
    assert run_command(["generate", "--tiling", "chair"]) == EXIT_USAGE
    assert run_command(["generate", "--tiling", "chair", "--level", "9"]) == EXIT_USAGE
    assert run_command(["verify", "--tiling", "chair", "--level", "1", "--colouring",
                        str(tmp_path / "missing.json")]) == EXIT_USAGE
    assert run_command(["oracle", "--tiling", "chair", "--level", "3", "--mode", "face",
                        "--limit", "10", "--out", str(tmp_path / "x")]) == EXIT_LIMIT


def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# chair run\ntiling = chair\nlevel = 2\nout = %s\n" % (tmp_path / "a.json"))
    assert read_config(str(cfg))["tiling"] == "chair"
    assert run_command(["generate", "--config", str(cfg)]) == EXIT_OK
    assert len(render_io.read(str(tmp_path / "a.json")).tiles) == 16
    assert run_command(["generate", "--config", str(cfg), "--level", "3"]) == EXIT_OK
    assert len(render_io.read(str(tmp_path / "a.json")).tiles) == 64
    cfg.write_text("colour = red\n")
    assert run_command(["generate", "--config", str(cfg)]) == EXIT_USAGE


def test_certify_rp_level4():
    verdict = certify("rp", 4)
    assert verdict["passed"], [c for c in verdict["checks"] if not c["passed"]]
    computed = {c["name"]: c["computed"] for c in verdict["checks"]}
    assert computed["vertex: oracle chromatic number"] == 3
    assert computed["edge: interior maximum degree (lower bound)"] == 8
    assert computed["face: oracle chromatic number"] == 3


def test_certify_is_stable():
    assert certify("chair", 3) == certify("chair", 3)


def test_module_entry_point(tmp_path):
    out = tmp_path / "v.json"
    proc = subprocess.run([sys.executable, "-m", "tilecolour", "certify", "--tiling", "chair",
                           "--level", "3", "--out", str(out)], capture_output=True, text=True)
    assert proc.returncode == EXIT_OK, proc.stderr
    assert json.loads(out.read_text())["passed"] is True
    assert "PASS" in proc.stderr
    small = subprocess.run([sys.executable, "-m", "tilecolour", "certify", "--tiling", "chair",
                            "--level", "2", "--out", str(out)], capture_output=True, text=True)
    # at level 2 no vertex lies deep enough inside to show degree 4
    assert small.returncode == EXIT_FAIL and "FAIL  edge: interior maximum degree" in small.stderr
