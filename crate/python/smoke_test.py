"""Smoke test for the zonoreach Python bindings.

Builds the extension with cargo (unless ZONOREACH_PY_LIB points at a built
library), imports it and exercises each exposed type.
"""

import json
import os
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def load_module(tmp):
    lib = os.environ.get("ZONOREACH_PY_LIB")
    if not lib:
        subprocess.run(
            ["cargo", "build", "--release", "-p", "zonoreach-py"], cwd=ROOT, check=True
        )
        lib = ROOT / "target" / "release" / "libzonoreach_py.so"
    shutil.copy(lib, Path(tmp) / "zonoreach_py.so")
    sys.path.insert(0, tmp)
    import zonoreach_py

    return zonoreach_py


def check_zonotope(zr):
    z = zr.Zonotope([0.0, 0.0], [[1.0, 0.0], [0.5, 0.5]])
    assert z.dim == 2 and z.num_generators == 2
    lo, hi = z.interval_hull()
    assert lo == [-1.5, -0.5] and hi == [1.5, 0.5]
    assert z.contains([1.5, 0.5]) and not z.contains([1.5, -0.5])
    rotated = z.linear_map([[0.0, -1.0], [1.0, 0.0]])
    assert rotated.interval_hull() == ([-0.5, -1.5], [0.5, 1.5])
    box = zr.Zonotope.from_bounds([-1.0, -1.0], [1.0, 1.0])
    total = z + box
    assert total.num_generators == 4
    assert z.cartesian_product(box).dim == 4
    reduced = total.reduce(2)
    assert reduced.num_generators <= 2
    for p in total.sample(200, seed=3):
        assert reduced.contains(p)
    assert zr.Zonotope.from_json(z.to_json()).generators == z.generators


def check_matrix_zonotope(zr):
    mz = zr.MatrixZonotope(
        [[1.0, 0.0], [0.0, 1.0]], [[[0.1, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.2]]]
    )
    assert mz.shape == (2, 2)
    lo, hi = mz.interval()
    assert abs(lo[0][0] - 0.9) < 1e-12 and abs(hi[1][1] - 1.2) < 1e-12
    for m in mz.sample(20, seed=1):
        assert mz.contains(m)
    image = mz.times_zonotope(zr.Zonotope([1.0, 1.0]))
    ilo, ihi = image.interval_hull()
    assert abs(ilo[0] - 0.9) < 1e-12 and abs(ihi[1] - 1.2) < 1e-12
    assert mz.vectorize().dim == 4


def check_estimator(zr):
    import random

    rng = random.Random(0)
    a, b = [[0.9, 0.1], [-0.2, 0.8]], [0.5, 0.2]
    sigma_v = 0.01
    est = zr.Estimator(n=3, m=2, sigma_v=sigma_v, lam=0.98)
    x = [1.0, 0.0]
    for _ in range(60):
        u = rng.uniform(-1.0, 1.0)
        nxt = [
            sum(a[i][j] * x[j] for j in range(2)) + b[i] * u + rng.uniform(-sigma_v, sigma_v)
            for i in range(2)
        ]
        est.update(zr.Estimator.regressor(x, [u]), nxt)
        x = nxt
    theta = [[a[0][0], a[1][0]], [a[0][1], a[1][1]], [b[0], b[1]]]
    models = est.model_set()
    assert models.shape == (3, 2)
    assert models.contains(theta, 1e-7), "true parameters lie outside the model set"
    assert est.step == 60
    restored = zr.Estimator.from_json(est.to_json())
    assert restored.center == est.center


def check_scenario(zr, tmp):
    out = Path(tmp) / "run"
    manifest = zr.run_scenario(str(ROOT / "crates" / "core" / "configs" / "example1_static.json"), str(out))
    assert manifest["triggers"], "no reachable sets were written"
    report = zr.validate_run(str(out), n_traj=20)
    assert report["violations"] == 0, report["violations"]
    json.loads((out / "validation.json").read_text())
    try:
        zr.run_scenario(str(ROOT / "crates" / "core" / "configs" / "missing.json"), str(out))
    except ValueError:
        pass
    else:
        raise AssertionError("missing config was accepted")


def main():
    with tempfile.TemporaryDirectory() as tmp:
        zr = load_module(tmp)
        check_zonotope(zr)
        check_matrix_zonotope(zr)
        check_estimator(zr)
        check_scenario(zr, tmp)
    print("python smoke test passed")


if __name__ == "__main__":
    main()
