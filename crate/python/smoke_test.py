"""Import the compiled extension and exercise the main entry points.

Build first, then run from the repo root:

    cargo build -p revival-py --features extension-module
    python python/smoke_test.py
"""

import cmath
import importlib.util
import pathlib
import shutil
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load():
    candidates = sorted(
        (p for d in ("release", "debug") for p in (ROOT / "target" / d).glob("librevival_py.*")
         if p.suffix in (".so", ".dylib", ".dll")),
        key=lambda p: p.stat().st_mtime,
        reverse=True,
    )
    if not candidates:
        sys.exit("no built extension under target/; run cargo build -p revival-py first")
    tmp = pathlib.Path(tempfile.mkdtemp())
    target = tmp / ("revival_py" + (".pyd" if candidates[0].suffix == ".dll" else ".so"))
    shutil.copy(candidates[0], target)
    spec = importlib.util.spec_from_file_location("revival_py", target)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def main():
    rv = load()
    p = rv.PhysicalParams(0.05, 0.05)
    print(p)

    scales = p.time_scales(1.0, "box")
    s = rv.CoherentState("box", p, 0.2, 1.0)
    xs = [-1.0 + 2.0 * i / 200 for i in range(201)]
    for t in (0.0, 0.3 * scales["t_cl"], 0.7 * scales["t_coll"], scales["t_rev"]):
        a = s.evolve(t).density(xs)
        b = s.evolve(t).density(xs, "image")
        gap = max(abs(u - v) for u, v in zip(a, b))
        assert gap < 1e-10, (t, gap)
    print(f"box dual-engine ok over {len(xs)} points")

    revived = s.evolve(scales["t_rev"])
    assert abs(abs(s.inner(revived)) - s.norm_sq()) < 1e-11
    print("full revival ok")

    z, tau = 0.7 - 0.2j, 0.4 + 0.3j
    lhs = rv.theta(z / (1j * tau), 1 / tau)
    rhs = cmath.sqrt(tau) * cmath.exp(cmath.pi * z * z / tau) * rv.theta(z, tau)
    assert abs(lhs - rhs) < 1e-12 * abs(rhs)
    print("modular identity ok")

    assert rv.revival_copies(1, 3) == (3, 0.0)
    assert rv.revival_copies(1, 4, "box") == (2, 0.0)
    try:
        rv.revival_copies(2, 4)
    except ValueError as e:
        print("rejected:", e)
    else:
        raise AssertionError("2/4 accepted")

    xs, w, p_inf, delta, uniform = rv.random_box_limit(rv.PhysicalParams(0.2, 0.2), -0.3, 1.0, panels=4)
    assert max(abs(a + b - c) for a, b, c in zip(p_inf, delta, uniform)) < 1e-12
    print(f"random box ok on {len(xs)} nodes, mass {sum(a * b for a, b in zip(w, p_inf)):.15f}")
    print("smoke test passed")


if __name__ == "__main__":
    main()
