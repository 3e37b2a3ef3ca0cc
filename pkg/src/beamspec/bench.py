"""Backend benchmark: compiled kernel vs NumPy fallback.

Times the characteristic-function batch (the hot loop of contour audits
and Newton refinement) on a contour-like workload:

    python -m beamspec.bench [--points N] [--repeat R]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from ._kernels import _chareq_py

try:
    from ._kernels import _chareq_cy
except ImportError:
    _chareq_cy = None


def _workload(points: int) -> np.ndarray:
    t = np.linspace(0.0, 1.0, points, endpoint=False)
    # rectangle boundary sweeping the first few mode bands
    box = (-2.0 - 0.1j, 0.0001 + 160.0j)
    x0, y0 = box[0].real, box[0].imag
    x1, y1 = box[1].real, box[1].imag
    e = np.minimum((t * 4).astype(int), 3)
    f = t * 4 - e
    pts = np.empty(points, dtype=complex)
    pts[e == 0] = x0 + (x1 - x0) * f[e == 0] + 1j * y0
    pts[e == 1] = x1 + 1j * (y0 + (y1 - y0) * f[e == 1])
    pts[e == 2] = x1 - (x1 - x0) * f[e == 2] + 1j * y1
    pts[e == 3] = x0 + 1j * (y1 - (y1 - y0) * f[e == 3])
    return pts


def _time(fn, mus, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(mus, 1.0, 1.0, 0.05, 0.0, 0.7071067811865476)
        best = min(best, time.perf_counter() - t0)
    return best


def run(points: int = 200000, repeat: int = 5) -> dict:
    mus = _workload(points)
    t_py = _time(_chareq_py.char_parts, mus, repeat)
    result = {"points": points, "numpy_s": t_py}
    if _chareq_cy is not None:
        t_cy = _time(_chareq_cy.char_parts, mus, repeat)
        g_py = _chareq_py.char_parts(mus, 1.0, 1.0, 0.05, 0.0, 0.7071067811865476)[0]
        g_cy = _chareq_cy.char_parts(mus, 1.0, 1.0, 0.05, 0.0, 0.7071067811865476)[0]
        agree = float(np.max(np.abs(g_py - g_cy) / np.maximum(np.abs(g_py), 1e-30)))
        result.update({"compiled_s": t_cy, "speedup": t_py / t_cy,
                       "max_rel_disagreement": agree})
    return result


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", type=int, default=200000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    res = run(args.points, args.repeat)
    print("characteristic batch, %d points:" % res["points"])
    print("  numpy backend    %.4f s" % res["numpy_s"])
    if "compiled_s" in res:
        print("  compiled backend %.4f s   (speedup x%.2f, max rel "
              "disagreement %.2e)" % (res["compiled_s"], res["speedup"],
                                      res["max_rel_disagreement"]))
    else:
        print("  compiled backend not built (pip install -e . --no-build-isolation)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
