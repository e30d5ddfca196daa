"""Smoke test for the pyautolex extension module.

Build and install first, e.g.:

    maturin build --release -m crates/py/Cargo.toml -o dist
    pip install dist/pyautolex-*.whl
    python python/smoke_test.py
"""

import math
import os
import tempfile

import pyautolex as al


def check_words():
    assert al.normalize("  Hund ") == "hund"
    assert al.levenshtein("kitten", "sitting") == 3
    assert math.isclose(al.normalized_distance("hand", "land"), 0.25)
    try:
        al.normalize("   ")
    except ValueError:
        pass
    else:
        raise AssertionError("empty word accepted")


def check_dataset():
    text = "language\tm1\na\txxxxx\nb\txxxxy\nc\txxzzz\n"
    ds = al.Dataset.from_tsv(text)
    assert ds.languages == ["a", "b", "c"]
    assert ds.meanings == ["m1"]
    assert ds.forms("a", "m1") == ["xxxxx"]

    d = ds.distances()
    assert d.labels == ["a", "b", "c"]
    assert math.isclose(d.get("a", "b"), 0.2)
    assert math.isclose(d.get("c", "a"), 0.6)
    assert d.support("a", "b") == 1
    assert d.upgma() == "((a:0.1,b:0.1):0.2,c:0.3);"

    eps = d.calibrate("a", "b", 100.0)
    assert math.isclose(d.divergence_times(eps)[0][1], 100.0)

    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "w.tsv")
        with open(path, "w", encoding="utf-8") as f:
            f.write(ds.to_tsv())
        again = al.Dataset.from_file(path)
        assert again.to_tsv() == ds.to_tsv()
    try:
        al.Dataset.from_file("/nonexistent/wordlist.tsv")
    except OSError:
        pass
    else:
        raise AssertionError("missing file accepted")


def check_synthetic_family():
    ds, tree, rates, slow = al.synth(languages=12, meanings=40, seed=7)
    assert len(ds.languages) == 12 and len(ds.meanings) == 40
    assert len(rates) == 40 and sum(slow) == 20

    rows = ds.stability()
    assert [r[3] for r in rows] == list(range(1, 41))
    assert ds.rank() == [r[0] for r in rows]

    curve = ds.correlation_curve([10, 40])
    assert curve[-1] == (40, 1.0)
    assert ds.rf_curve([40]) == [(40, 0)]
    assert math.isclose(ds.distances(top_n=40).correlation(ds.distances()), 1.0)

    assert al.rf_difference(tree, tree) == 0
    assert al.rf_difference(ds.distances().upgma(), tree) >= 0

    again = al.synth(languages=12, meanings=40, seed=7)
    assert again[0].to_tsv() == ds.to_tsv() and again[1] == tree


if __name__ == "__main__":
    check_words()
    check_dataset()
    check_synthetic_family()
    print("pyautolex smoke test: ok")
