import csv
import io
import json

import pytest

from hamcheck.analytics import class_distribution, location_consistency
from hamcheck.codec import decoding_efficiency
from hamcheck.corpus import ingest_corpus
from hamcheck.errors import WriteFailed
from hamcheck.reports import emit_report, from_dict, histogram_csv, load_report, to_csv, to_dict
from hamcheck.synthetic import bundled_data_dir


@pytest.fixture(scope="module")
def reports(inv):
    cons = ingest_corpus(bundled_data_dir() / "consistency" / "consistency.tsv", inv)
    syn = ingest_corpus(bundled_data_dir() / "corpora" / "synthetic100.tsv", inv)
    return {
        "consistency": location_consistency(cons),
        "distribution": class_distribution(syn),
        "eta": decoding_efficiency(syn),
    }


@pytest.mark.parametrize("kind", ["consistency", "distribution", "eta"])
@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_emit_twice_byte_identical(tmp_path, reports, kind, fmt):
    a = emit_report(reports[kind], fmt, tmp_path / f"a.{fmt}").read_bytes()
    b = emit_report(reports[kind], fmt, tmp_path / f"b.{fmt}").read_bytes()
    assert a == b and a


@pytest.mark.parametrize("kind", ["consistency", "distribution", "eta"])
def test_json_round_trip(tmp_path, reports, kind):
    path = emit_report(reports[kind], "json", tmp_path / "r.json")
    assert load_report(path) == reports[kind]
    assert from_dict(json.loads(json.dumps(to_dict(reports[kind])))) == reports[kind]


def test_csv_headers(reports):
    heads = {k: to_csv(v).splitlines()[0] for k, v in reports.items()}
    assert heads == {
        "consistency": "class_alias,norm,n,mean_px,std_px",
        "distribution": "block,class_index,class_alias,count",
        "eta": "unique_glosses,singly_labeled,eta_percent,max_collision",
    }


def test_single_sample_has_empty_std(reports):
    rows = list(csv.DictReader(io.StringIO(to_csv(reports["consistency"]))))
    neck = [r for r in rows if r["class_alias"] == "LOC_NECK"]
    assert [r["std_px"] for r in neck] == ["", ""]
    assert [r["n"] for r in neck] == ["1", "1"]


def test_eta_csv_and_histogram(reports):
    assert to_csv(reports["eta"]).splitlines()[1] == "100,80,80.0,2"
    assert histogram_csv(reports["eta"]) == "collision_size,groups\n1,80\n2,10\n"


def test_distribution_includes_zero_classes(reports):
    rows = list(csv.DictReader(io.StringIO(to_csv(reports["distribution"]))))
    assert len(rows) == 8 + 12 + 4 + 6 + 26 + 8 + 6 + 36 + 7 + 36
    assert any(r["count"] == "0" for r in rows)


def test_write_failed(tmp_path, reports):
    with pytest.raises(WriteFailed):
        emit_report(reports["eta"], "csv", tmp_path / "no" / "such" / "dir.csv")


def test_unsupported():
    with pytest.raises(TypeError):
        to_csv(object())
