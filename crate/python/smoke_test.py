"""Smoke test for the superfock extension module.

Build and stage the module, then run this script:

    cargo build --release -p superfock-py --features extension-module
    cp target/release/libsuperfock.so python/superfock.so
    python3 python/smoke_test.py
"""

import json
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import superfock as sf


def main():
    assert sf.delta_coefficients(2, 2) == ["-1/2", "1/4"]
    assert sf.delta_residual(3, 9, 10).terms() == []

    r = json.loads(sf.verify_algebra("n2-mirror-twisted", 2))
    assert r["violations"] == [], r

    i = sf.Scalar.i()
    assert i * i == sf.Scalar("-1")
    s2 = sf.Scalar.sqrt2()
    assert s2 * s2 == sf.Scalar("2")
    assert (s2 / sf.Scalar("2")).components() == ["0", "0", "1/2", "0"]

    ns = sf.FockSpace("fermion-ns", "5/2")
    assert ns.basis() == ["|0>", "psi(-1/2)|0>", "psi(-3/2)|0>", "psi(-3/2)psi(-1/2)|0>"]
    assert ns.mode_apply(0, "1/2", "psi(-1/2)|0>") == "|0>"

    v = sf.Vosa()
    assert v.central_charge() == "3/2"
    # a(-1)a(-1)|0> is twice the boson conformal vector; τ has boson weight 1
    assert v.mode("a(-1)a(-1)|0>", "1", "a(-1)psi(-1/2)|0>") == "(2)·a(-1)psi(-1/2)|0>"
    assert json.loads(v.verify_jacobi(1, 2))["passed"]

    m = sf.SigmaModule(3)
    assert m.ground_weight() == "1/16"
    coeffs = [(e, c.components()[0]) for e, c in m.character().terms()]
    assert coeffs == [("0", "2"), ("1", "4"), ("2", "8"), ("3", "16")], coeffs

    cal = json.loads(sf.calibrate_n2(1, 1))
    assert cal["report"]["passed"]

    k = sf.MirrorTwistedModule(3)
    assert k.ground_l0() == "1/8"
    assert k.character().dilate(2) == m.character()
    assert json.loads(k.character_identity())["passed"]

    code, out = sf.run_cli(["--json", "delta", "--k", "5", "--terms", "2"])
    assert code == 0 and json.loads(out)["a"] == ["-2", "2"]

    print("superfock smoke test: ok")


if __name__ == "__main__":
    main()
