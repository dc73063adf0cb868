import csv
import io
import subprocess
import sys

import pytest

from hamcheck.cli import main
from hamcheck.inventory import reference_manifest_path
from hamcheck.synthetic import bundled_data_dir

DATA = bundled_data_dir()
SYN10 = str(DATA / "corpora" / "synthetic10.tsv")
CONS = str(DATA / "consistency" / "consistency.tsv")


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main([str(a) for a in argv], stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_eta_ten_glosses():
    code, out, err = run("label", "eta", "--corpus", SYN10)
    assert code == 0
    [row] = list(csv.DictReader(io.StringIO(out)))
    assert row["eta_percent"] == "80.0" and row["max_collision"] == "2"
    assert "records=10" in err


def test_eta_per_language_and_histogram(tmp_path):
    out_path, hist = tmp_path / "eta.csv", tmp_path / "hist.csv"
    code, out, _ = run("label", "eta", "--corpus", SYN10, "--per-language",
                       "--out", out_path, "--histogram", hist)
    assert code == 0 and "records=10" in out
    rows = list(csv.DictReader(out_path.open()))
    assert rows[0]["language"] == "ALL" and len(rows) == 6
    assert hist.read_text() == "collision_size,groups\n1,8\n2,1\n"


def test_parse_empty_label():
    code, out, err = run("label", "parse", "")
    assert code == 2 and "error code=EmptyLabel" in err


def test_parse_prints_diagnostics_and_canonical():
    code, out, _ = run("label", "parse", ":HS_FLAT::EFD_U::PALM_L::LOC_DIST_CLOSE::LOC_HEAD::SYM_PAR:")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("warning BlockOrderViolation")
    assert lines[-1] == ":HS_FLAT::EFD_U::PALM_L::LOC_HEAD::LOC_DIST_CLOSE:"


def test_unknown_symbol_exit():
    code, _, err = run("label", "encode", ":HS_FLAT::WHAT:")
    assert code == 2 and err.strip().splitlines()[-1].startswith("error code=UnknownSymbol")


def test_encode_then_decode_contains_gloss():
    rows = list(csv.DictReader(open(SYN10, encoding="utf-8"), delimiter="\t"))
    for row in rows[:4]:
        code, label, _ = run("label", "encode", row["hamnosys"])
        assert code == 0
        # a leading minus sign needs "--" so it is not read as an option
        code, out, _ = run("label", "decode", "--corpus", SYN10, "--", label.strip())
        assert code == 0
        assert row["gloss_id"] in {line.split("\t")[0] for line in out.splitlines()}


def test_decode_bad_text_is_usage():
    assert run("label", "decode", "1,2", "--corpus", SYN10)[0] == 1


def test_decode_out_of_range_is_data_error():
    code, _, err = run("label", "decode", "99,0,-1,-1,0,0,-1,-1,-1,-1", "--corpus", SYN10)
    assert code == 2 and "IndexOutOfRange" in err


def test_initial_frame_unanimous():
    code, out, _ = run("pose", "initial-frame", DATA / "pose" / "unanimous_peak.json")
    assert code == 0
    assert out.splitlines()[0].startswith("right: frame=17 candidates=6")


def test_initial_frame_both_hands():
    code, out, _ = run("pose", "initial-frame", "--hand", "both", DATA / "pose" / "unanimous_peak.json")
    assert code == 0 and "left: frame=17 candidates=6" in out


def test_initial_frame_monotone():
    code, _, err = run("pose", "initial-frame", DATA / "pose" / "monotone.json")
    assert code == 2 and "code=NoExtremumFound" in err


def test_distance_three_four_five():
    code, out, _ = run("pose", "distance", "--frame", "0", DATA / "pose" / "three_four_five.json",
                       "nose", "right_wrist")
    assert code == 0
    assert "L1=7.0" in out and "L2=5.0" in out


def test_distance_detected_frame():
    code, out, _ = run("pose", "distance", DATA / "consistency" / "landmarks" / "c001.json",
                       "nose", "right_wrist")
    assert code == 0 and "frame=9 (detected)" in out and "L2=5.0" in out


def test_schema_error(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"topology": "body33"}')
    code, _, err = run("pose", "initial-frame", bad)
    assert code == 2 and "code=SchemaError" in err


def test_consistency_report(tmp_path):
    out_path = tmp_path / "c.csv"
    code, out, _ = run("report", "consistency", "--corpus", CONS, "--dimension", "tb",
                       "--hand", "right", "--out", out_path)
    assert code == 0
    assert "v_min=0.5 window=1" in out and "reference_line=LOC_BREAST_LINE" in out
    assert "records=5 parse_failures=0 frame_failures=0" in out
    rows = {(r["class_alias"], r["norm"]): r for r in csv.DictReader(out_path.open())}
    assert rows[("LOC_HEAD", "L1")]["mean_px"] == "10.5"
    assert rows[("LOC_CHIN", "L2")]["mean_px"] == "15.0"
    assert rows[("LOC_NECK", "L2")]["std_px"] == ""


def test_consistency_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run("report", "consistency", "--corpus", CONS, "--format", "json", "--out", a)
    run("report", "consistency", "--corpus", CONS, "--format", "json", "--out", b)
    assert a.read_bytes() == b.read_bytes()


def test_distribution_totals():
    code, out, _ = run("report", "distribution", "--corpus", CONS)
    assert code == 0
    totals = {}
    for r in csv.DictReader(io.StringIO(out)):
        totals[r["block"]] = totals.get(r["block"], 0) + int(r["count"])
    assert totals["HandshapeBase"] == totals["ExtendedFingerDirection"] == totals["PalmOrientation"] == 5


def test_consistency_without_landmarks(tmp_path):
    path = tmp_path / "c.tsv"
    path.write_text("gloss_id\tlanguage\tgloss_text\thamnosys\tlandmark_path\n"
                    "a\tDGS\tA\t:HS_FLAT::EFD_U::PALM_L::LOC_HEAD:\t\n")
    code, _, err = run("report", "consistency", "--corpus", path)
    assert code == 2 and "code=NoEligibleRecords" in err


def test_all_unparsable(tmp_path):
    path = tmp_path / "c.tsv"
    path.write_text("gloss_id\tlanguage\tgloss_text\thamnosys\tlandmark_path\n"
                    "a\tDGS\tA\t:EFD_U:\t\n")
    code, _, err = run("report", "distribution", "--corpus", path)
    assert code == 2 and "code=AllRecordsUnparsable" in err


def test_empty_corpus(tmp_path):
    path = tmp_path / "c.tsv"
    path.write_text("gloss_id\tlanguage\tgloss_text\thamnosys\tlandmark_path\n")
    code, _, err = run("label", "eta", "--corpus", path)
    assert code == 2 and "code=EmptyCorpus" in err


@pytest.mark.parametrize("argv", [
    ["report", "distribution", "--frame", "3", "--corpus", CONS],
    ["report", "consistency", "--corpus", CONS, "--window", "4"],
    ["report", "consistency", "--corpus", CONS, "--v-min", "1.5"],
    ["report", "consistency", "--corpus", CONS, "--reference-line", "LOC_HEAD"],
    ["report", "consistency"],
    ["label", "parse", ":HS_FIST:", "--per-language"],
    ["pose", "distance", "x.json", "nose", "right_wrist", "--hand", "both"],
    ["label", "eta", "--format", "xml", "--corpus", SYN10],
    ["nonsense"],
    [],
])
def test_usage_errors(tmp_path, argv):
    out_path = tmp_path / "never.csv"
    code, _, err = run(*argv, *(["--out", out_path] if argv[:1] == ["report"] else []))
    assert code == 1 and "usage" in err
    assert not out_path.exists()


def test_inventory_flag_and_env(tmp_path, monkeypatch):
    bad = tmp_path / "inv.csv"
    bad.write_text("codepoint_hex,alias,block,subclass,class_index,display_name\n")
    monkeypatch.setenv("HAMCHECK_INVENTORY", str(bad))
    code, _, err = run("label", "encode", ":HS_FIST::EFD_U::PALM_L:")
    assert code == 2 and "code=MissingBlock" in err
    code, out, _ = run("label", "encode", ":HS_FIST::EFD_U::PALM_L:",
                       "--inventory", reference_manifest_path())
    assert code == 0 and out.strip() == "-1,0,-1,-1,0,2,-1,-1,-1,-1"


def test_topology_config_flag(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text('{"topology": "hand21", "roles": {"right_thumb_mcp": null}}')
    code, out, _ = run("pose", "initial-frame", "--topology-config", cfg, DATA / "pose" / "unanimous_peak.json")
    assert code == 0 and "candidates=4" in out and "RoleUnmapped" in out
    cfg.write_text('{"topology": "hand21", "roles": {"nose": 99}}')
    code, _, err = run("pose", "initial-frame", "--topology-config", cfg, DATA / "pose" / "unanimous_peak.json")
    assert code == 2 and "code=SchemaError" in err


def test_console_script_exit_codes():
    ok = subprocess.run([sys.executable, "-m", "hamcheck", "pose", "initial-frame",
                         str(DATA / "pose" / "unanimous_peak.json")], capture_output=True, text=True)
    assert ok.returncode == 0 and "right: frame=17 candidates=6" in ok.stdout
    bad = subprocess.run([sys.executable, "-m", "hamcheck", "label", "parse", ""],
                         capture_output=True, text=True)
    assert bad.returncode == 2
    usage = subprocess.run([sys.executable, "-m", "hamcheck", "label"], capture_output=True, text=True)
    assert usage.returncode == 1
