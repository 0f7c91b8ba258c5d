"""Smoke test for the `qes` extension module.

Build the library first:

    cargo build --release -p qes-py
    python3 python/smoke_test.py [path/to/libqes.so]

Without an argument the script looks in target/release. The shared library is
copied under the module name `qes` into a temporary directory and imported
from there.
"""

import importlib
import math
import shutil
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def locate(argv):
    if len(argv) > 1:
        return Path(argv[1])
    for name in ("libqes.so", "libqes.dylib", "qes.dll"):
        p = ROOT / "target" / "release" / name
        if p.exists():
            return p
    sys.exit("libqes not found; run `cargo build --release -p qes-py` first")


def load(lib):
    tmp = Path(tempfile.mkdtemp(prefix="qes-smoke-"))
    suffix = ".pyd" if lib.suffix == ".dll" else ".so"
    shutil.copy(lib, tmp / ("qes" + suffix))
    sys.path.insert(0, str(tmp))
    return importlib.import_module("qes"), tmp


def check_weyl(qes):
    x, d = qes.DiffOp.x(), qes.DiffOp.d()
    # [∂, x] = 1
    assert (d * x - x * d) == qes.DiffOp.one()
    assert qes.DiffOp.term(2, 1, "3/2").order() == 1
    g = qes.generators(4, 2)
    tp, t0, tm = g["T+"], g["T0"], g["T-"]
    assert (qes.commutator(tp, tm) + t0 + t0).is_zero()
    assert {"Q1", "Q3", "Qbar3", "F1", "F3"} <= set(g)
    # {F1, F3} = -16 at n = 4 with the discovered mixing
    ac = qes.anticommutator(g["F1"], g["F3"])
    minus16 = qes.DiffOp.term(0, 0, -16)
    assert ac == qes.MatOp(minus16, qes.DiffOp.term(0, 0, 0), qes.DiffOp.term(0, 0, 0), minus16)


def check_verify(qes):
    reports = qes.verify_suite(n_max=6, delta_max=2)
    failing = [r for r in reports if not r.holds]
    assert failing and all(r.tag == "19" for r in failing), failing[:3]
    assert all(r.holds for r in qes.verify_suite(n_max=6, delta_max=2, metric="killing"))
    assert any(not r.holds for r in qes.verify_suite(n_max=4, delta_max=1, fault="T+"))
    scan = qes.delta4_scan()
    assert len(scan) == 100 and all(terms > 0 for _, _, terms in scan)


def check_spectral(qes):
    spec = qes.HamiltonianSpec(2, c=1)
    assert spec.k0 == Fraction(-1, 8) and spec.c == 1

    s = qes.algebraic_spectrum(2, c=0)
    assert s.energies == [-8.0, 0.0, 0.0, 8.0]
    assert [lvl.exact for lvl in s.levels] == ["-8", "0", "8"]

    s = qes.algebraic_spectrum(2, c=Fraction(1, 2))
    assert [lvl.nodes[0] for lvl in s.levels] == [(0, 0), (2, 2), (2, 0), (4, 2)]
    hi = math.sqrt(32.25 + 4 * math.sqrt(64.5))
    assert abs(s.energies[-1] - hi) < 1e-10

    poly, coeffs = qes.spectral_polynomial(3)
    assert coeffs[0] == "-c^6 + 8c^4 + 1344c^2 - 23040", coeffs
    assert qes.reflection_check(4) == (True, True)
    assert qes.gauged_preserves_module(5)

    rows = qes.sweep(3, 0, 10, 5)
    assert len(rows) == 5 and all(len(e) == 6 for _, e in rows)
    assert qes.sweep_csv(2, 0, "1/2", 2).startswith("c,E_1,E_2,E_3,E_4\n0,-8,0,0,8\n")

    c_star, gap, levels = qes.find_degeneracy(3, 0, 10)
    assert 4.0 <= c_star <= 6.0 and gap < 0.05 and levels == (3, 4)
    assert qes.find_degeneracy(2, Fraction(1, 2), 10) is None

    matches = qes.numeric_crosscheck(2, c=0, grid=400)
    assert len(matches) == 4 and max(m[2] for m in matches) < 1e-2


def check_errors(qes):
    for call in (
        lambda: qes.algebraic_spectrum(2, c=0.5),
        lambda: qes.algebraic_spectrum(2),
        lambda: qes.HamiltonianSpec(1, k0=0),
        lambda: qes.verify_suite(fault="X"),
    ):
        try:
            call()
        except (TypeError, ValueError):
            continue
        raise AssertionError("expected an error")


def main():
    qes, tmp = load(locate(sys.argv))
    try:
        for check in (check_weyl, check_verify, check_spectral, check_errors):
            check(qes)
            print(f"{check.__name__}: ok")
    finally:
        shutil.rmtree(tmp, ignore_errors=True)
    print("smoke test passed")


if __name__ == "__main__":
    main()
