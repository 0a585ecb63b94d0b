"""Smoke test for the grc_py extension.

Build it with

    cargo build --release -p grc-py --features extension-module
    cp target/release/libgrc_py.so python/grc_py.so

(or `maturin develop -m crates/py/Cargo.toml --features extension-module`),
then run `python3 python/smoke_test.py`.
"""

import json
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import grc_py  # noqa: E402


def main():
    s = grc_py.singular("k11", "1/3", "2/5", 2)
    assert s.dims() == (1, 0), s
    assert s.to_dict()["algebra"] == "k11"

    assert grc_py.predict("vect11", "0", "0", 2) == (1, 1, "ThMain-i")
    ops = grc_py.brackets("vect11", "0", "0", 2)
    assert len(ops) == 2
    for op in ops:
        checks, failures = op.verify("pgl21", 4)
        assert checks > 0 and failures == 0, (op, failures)

    ex = grc_py.ex1("2", "-3")
    assert ex.lambda1 == "0" and ex.lambda2 == "0"
    assert ex.verify("k11-full", 4)[1] == 0
    print(ex.formula())

    csv = grc_py.classify("vect11", ["0", "2"], (1, 2), "csv")
    assert csv.splitlines()[0].startswith("algebra,mu1,mu2,n")
    assert len(csv.splitlines()) == 9

    case = grc_py.tensor_case("1", "0", "-1", "0")
    assert case["case"]["case"] == "case-iv", json.dumps(case)

    try:
        grc_py.singular("osp", "0", "0", 1)
    except ValueError:
        pass
    else:
        raise AssertionError("bad algebra accepted")

    print("smoke test ok")


if __name__ == "__main__":
    main()
