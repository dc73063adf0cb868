import filecmp
import random

from hamcheck.codec import encode
from hamcheck.parser import parse_label, serialize
from hamcheck.synthetic import bundled_data_dir, collision_corpus_rows, random_sign, write_bundled_data


def test_bundled_fixtures_regenerate(tmp_path):
    src = bundled_data_dir()
    (tmp_path / "hamnosys_ref.csv").write_bytes((src / "hamnosys_ref.csv").read_bytes())
    write_bundled_data(tmp_path)
    produced = sorted(p.relative_to(tmp_path) for p in tmp_path.rglob("*") if p.is_file())
    bundled = sorted(p.relative_to(src) for p in src.rglob("*") if p.is_file())
    assert produced == bundled
    for rel in produced:
        assert filecmp.cmp(tmp_path / rel, src / rel, shallow=False), rel


def test_random_signs_are_valid(inv):
    rng = random.Random(0)
    for _ in range(200):
        s = random_sign(rng, inv)
        assert parse_label(serialize(s, inv), inv) == (s, [])


def test_collision_rows_shape(inv):
    rows = collision_corpus_rows(20, 3, inv, seed=1)
    labels = {}
    for _, _, text, label, _ in rows:
        labels.setdefault(encode(parse_label(label, inv)[0], inv), set()).add(text)
    assert sorted(len(v) for v in labels.values()).count(2) == 3
    assert len({r[2] for r in rows}) == 20
