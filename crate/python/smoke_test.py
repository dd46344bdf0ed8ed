"""Smoke test for the macx_py extension.

Build and install first:

    cd crates/py && maturin build --release -o dist && pip install dist/*.whl
"""

import json

import macx_py


def main():
    sq = macx_py.SimplicialComplex(4, [[1, 2], [2, 3], [3, 4], [4, 1]])
    betti = {(i, j): r for i, j, r in sq.betti()}
    assert betti == {(0, 0): 1, (1, 2): 2, (2, 4): 1}, betti
    assert sq.betti("gf3", "taylor") == sq.betti("gf3", "hochster")
    assert sq.nilpotence_length() == 2

    ico = macx_py.SimplicialComplex.catalog("I12")
    assert ico.m == 12 and ico.dim == 2
    assert ico.f_vector() == [12, 30, 20]
    props = json.loads(ico.props())
    assert props["flag"] and props["nsc"] and not props["suspension"]
    assert props["scc"]["verdict"] == "holds"
    fp = json.loads(ico.fingerprint())
    assert fp["nil"] == 3 and fp["socle"] == 1

    o6 = macx_py.SimplicialComplex.catalog("O6")
    assert o6.h_vector() == [1, 3, 3, 1]
    assert o6.is_characteristic([[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 0, 0], [0, -1, 0], [0, 3, -1]])

    try:
        ico.betti("gf2", "koszul")
    except ValueError:
        pass
    else:
        raise AssertionError("unknown oracle accepted")

    print("smoke test ok")


if __name__ == "__main__":
    main()
