"""Smoke test for the `ekrw` Python extension.

Build first, then run from the repository root:

    cargo build --release -p ekrw-python
    python3 python/smoke_test.py

If `ekrw` is not importable (for example after `maturin develop`), the script
loads target/release/libekrw.so under the module name `ekrw`.
"""

import importlib.machinery
import importlib.util
import pathlib
import sys


def load_ekrw():
    try:
        import ekrw  # noqa: F401

        return sys.modules["ekrw"]
    except ImportError:
        pass
    root = pathlib.Path(__file__).resolve().parent.parent
    for profile in ("release", "debug"):
        lib = root / "target" / profile / "libekrw.so"
        if lib.exists():
            loader = importlib.machinery.ExtensionFileLoader("ekrw", str(lib))
            spec = importlib.util.spec_from_file_location("ekrw", lib, loader=loader)
            module = importlib.util.module_from_spec(spec)
            loader.exec_module(module)
            sys.modules["ekrw"] = module
            return module
    sys.exit("ekrw extension not found; run `cargo build --release -p ekrw-python` first")


def main():
    ekrw = load_ekrw()

    j2 = ekrw.j_family(7, 3, 2)
    assert len(j2) == 12 and j2.is_intersecting()
    assert j2.trivial_center() is None
    assert j2.class_name() == "J2"
    assert j2.hm_or_ekr_centers() == []

    again = ekrw.Family.from_json(j2.to_json())
    assert again == j2 and again.to_json() == j2.to_json()

    star = ekrw.star(7, 3)
    assert star.trivial_center() == 0 and len(star) == 15
    hm = ekrw.hilton_milner(8, 4)
    assert hm.hm_or_ekr_centers() == [0]

    b = ekrw.bounds(9, 4)
    assert (b["ekr"], b["hm"], b["main"]) == (56, 53, 51), b

    shifted = j2.shift(0, 5)
    assert len(shifted) == len(j2) and shifted.is_intersecting()
    stable, trace = j2.stabilize()
    assert stable.is_stable() and len(stable) == 12
    history = trace["potential_history"]
    steps = [s["changed"] for s in trace["applied"]]
    for changed, (a, b) in zip(steps, zip(history, history[1:])):
        assert (b < a) if changed else (b == a)

    pre = j2.preimages(0, 5)
    assert pre and all(h.isomorphic_to(j2) for h in pre)

    assert ekrw.is_non_separable(4, [[0], [1, 2], [3]])
    assert not ekrw.is_non_separable(4, [[0, 1], [0, 2], [0, 3]])
    assert ekrw.is_non_separable(8, ekrw.prop1_system(3, 1, 1))
    assert ekrw.prop2_family(7, 3, 2).non_separable()

    fam = ekrw.random_family(8, 3, 20, 42)
    assert fam == ekrw.random_family(8, 3, 20, 42) and fam.is_intersecting()

    out = ekrw.search(7, 3, forbid="trivial,hm,g2", enumerate=True, budget=60)
    assert out["complete"] and out["optimum"] == 12, out["optimum"]
    assert len(out["witnesses"]) == 1

    report = ekrw.verify("hm", 7, 3, budget=60)
    assert report["verdict"] == "verified", report["verdict"]
    assert sorted(report["classes"]) == ["F1", "G2"], report["classes"]

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
