"""Smoke test for the polylimit Python bindings.

Install first with
    pip install --no-build-isolation -e crates/python
then run
    python python/smoke_test.py
"""

import math

import polylimit_py as pl


def approx(a, b, tol):
    assert abs(a - b) <= tol, f"{a} vs {b}"


def flat_case():
    cf = pl.solve(pl.CubicDifferential(0), 4.0, 128)
    for u in cf.values:
        approx(u, math.log(2) / 3, 1e-10)
    assert cf.iterations == 0


def wang_solution():
    cd = pl.CubicDifferential(2, phase=0.4)
    assert cd.n == 2 and not cd.is_zero_mode()
    approx(abs(cd(1 + 1j)), 2.0, 1e-12)
    cf = pl.solve(cd, 4.0, 512)
    assert cf.above_flat()
    assert max(cf.psi_norm_sq()) <= 0.5 + 1e-6
    conn = cf.connection()
    assert conn.reality_residual(0.5 + 0.3j) < 1e-12
    lifts = conn.develop_boundary(3.0, 180)
    assert len(lifts) == 180 and all(w > 0 for _, _, w in lifts)
    d = pl.ConvexDomain.from_lifts(lifts)
    assert d.dominant_vertices() == 5, d.dominant_vertices()
    assert d.hausdorff(d) < 1e-12


def polygons():
    square = pl.ConvexDomain.from_points([[1, 1], [-1, 1], [-1, -1], [1, -1]])
    assert square.dominant_vertices() == 4
    assert len(square.dual()) == 4
    approx(square.diameter(), 2 * math.sqrt(2), 1e-9)


def tilings():
    t = pl.tits_tiling(4, 4, 4, s=0.5, depth=6)
    assert t.length_counts() == [1, 3, 6, 12, 21, 36, 63]
    assert t.max_overlap() < 1e-10
    assert t.gauss_bonnet(count=20, size=30, seed=3) == 0
    for sigma in pl.reflections(3, 4, 5, 0.2):
        tr = sum(sigma[i][i] for i in range(3))
        approx(tr, -1.0, 1e-12)
    assert pl.corner_index(math.pi / 3) == -2


def errors():
    for bad in (lambda: pl.solve(pl.CubicDifferential(1), -1.0),
                lambda: pl.tits_tiling(2, 3, 7)):
        try:
            bad()
        except ValueError:
            continue
        raise AssertionError("expected ValueError")


if __name__ == "__main__":
    for case in (flat_case, wang_solution, polygons, tilings, errors):
        case()
        print(f"ok  {case.__name__}")
