"""Smoke test for the fusion6j extension module.

Build and install first:
    pip install maturin
    pip install --no-build-isolation -e crates/py
Then run with `python3 python/smoke_test.py` or `pytest python/`.
"""

import json
import math
import os
import tempfile

import fusion6j
from fusion6j import Category, Fusion6jError


def test_builtins_listed():
    names = fusion6j.builtin_names()
    assert "fib" in names and "yanglee" in names


def test_fib_basics():
    c = Category.builtin("fib")
    assert c.labels == ["1", "x"]
    assert c.rank == 2
    assert c.dual("x") == "x"
    assert c.n("x", "x", "1") == 1
    ok, residual, count = c.check_pentagon()
    assert ok and residual == 0.0 and count > 0
    # F° and G° agree for self-dual x
    assert c.fo("x") == c.go("x")


def test_fib_report():
    r = Category.builtin("fib").report()
    assert r["exit_code"] == 0
    verdicts = {v["name"]: v["value"] for v in r["verdicts"]}
    assert verdicts["spherical structure exists"] is True
    assert verdicts["F is tetrahedrally invariant"] is True


def test_fib_b_one_breaks_tetrahedral_symmetry():
    r = Category.builtin("fib", b="1").report("tetra")
    verdicts = {v["name"]: v["value"] for v in r["verdicts"]}
    assert r["exit_code"] == 0
    assert verdicts["basis-level tetrahedral relations (multiplicity-free)"] is False


def test_yanglee_float_dimensions():
    c = Category.builtin("yanglee", backend="float")
    fp = c.fp_dimensions()
    assert math.isclose(fp[1], (1 + math.sqrt(5)) / 2, rel_tol=1e-9)
    r = c.report("pivotal")
    verdicts = {v["name"]: v["value"] for v in r["verdicts"]}
    assert verdicts["pseudo-unitary"] is False


def test_round_trip():
    c = Category.builtin("pointed:Z3:1")
    text = c.to_json()
    assert json.loads(text)["schema"] == "fusion6j-category/v1"
    assert Category.from_json(text).to_json() == text
    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, "z3.json")
        c.save(path)
        assert Category.load(path).to_json() == text
        assert Category.load(path, backend="float").backend == "float"


def test_errors():
    for bad in [
        lambda: Category.builtin("nope"),
        lambda: Category.builtin("fib", backend="quad"),
        lambda: Category.from_json("{"),
        lambda: Category.builtin("fib").fo("y"),
        lambda: Category.builtin("fib").report("bogus"),
    ]:
        try:
            bad()
        except Fusion6jError:
            continue
        raise AssertionError("expected Fusion6jError")


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            fn()
            print(f"ok {name}")
