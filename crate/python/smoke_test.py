"""Smoke test for the pyeqlogic extension module.

Build and install the module first, for example:

    pip install maturin
    maturin build --release -m crates/python/Cargo.toml -o dist
    pip install dist/pyeqlogic-*.whl

then run `python python/smoke_test.py` from the repository root.
"""

from pathlib import Path

import pyeqlogic

DATA = Path(__file__).resolve().parent.parent / "data"


def read(name):
    return (DATA / name).read_text()


def main():
    monoid = pyeqlogic.Theory(read("monoid.eq"))
    assert monoid.sorts() == ["M"]
    assert len(monoid) == 3
    assert ("unitL", "plus(e(),x) = x") in monoid.equations()

    z2 = pyeqlogic.Model(monoid, read("z2.mdl"))
    assert z2.carrier("M") == ["0", "1"]
    assert pyeqlogic.eval(z2, "plus(x,y)", {"x": "1", "y": "1"}) == "0"
    assert z2.equal_in_model("[x,y:M] plus(x,y) = plus(y,x)") is None
    assert pyeqlogic.satisfies(z2, monoid) is None

    right = pyeqlogic.Model(monoid, read("right_proj.mdl"))
    assert right.satisfies(monoid) == ("unitR", {"x": "1"})

    proof = read("unitL_inst.prf")
    assert pyeqlogic.check_proof(monoid, proof) == "{x:M} ⊢ plus(e(),x) ≡ x : M"
    assert z2.sound(monoid, proof)
    rebuilt = pyeqlogic.completeness(monoid, read("units.prf"))
    assert monoid.check(rebuilt) == "{x:M} ⊢ plus(e(),x) ≡ plus(x,e()) : M"

    try:
        monoid.check(read("invalid/bad_claim.prf"))
    except pyeqlogic.ProofError as e:
        assert "derivation concludes" in str(e)
    else:
        raise AssertionError("wrong claim accepted")

    try:
        pyeqlogic.parse("sort M\nop plus : M M -> N\n")
    except pyeqlogic.ParseError as e:
        assert "line 2" in str(e)
    else:
        raise AssertionError("undeclared sort accepted")

    comm = "[x,y:M] plus(x,y) = plus(y,x)"
    assert pyeqlogic.countermodel(monoid, comm, 2) is None
    model, witness = monoid.countermodel(comm, 3)
    assert model.carrier("M") == ["0", "1", "2"]
    assert witness == {"x": "1", "y": "2"}
    assert model.equal_in_model(comm) == witness

    code, out, err = pyeqlogic.run_cli(["eval", str(DATA / "monoid.eq"), str(DATA / "z2.mdl"), "plus(x,y)", "--env", "x=1,y=1"])
    assert (code, out, err) == (0, "0\n", "")

    print("pyeqlogic smoke test passed")


if __name__ == "__main__":
    main()
