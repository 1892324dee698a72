"""Benchmark the compiled kernels against the pure-Python fallback.

Runs the two hot kernels on the same synthetic frame with both backends,
verifies the outputs agree exactly, and reports timings. Invoked via
`novascout bench` or benchmarks/bench_kernels.py.
"""

from __future__ import annotations

import math
import time

import numpy as np

from . import _kernels_py
from .colorspace import rgb_raster_to_hsi
from .segmentation import quantize_gray
from .synth import natural_image

try:
    from . import _speedups
except ImportError:
    _speedups = None


def _time(func, repeat: int) -> float:
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        func()
        best = min(best, time.perf_counter() - t0)
    return best


def run_benchmark(width: int = 640, height: int = 480, repeat: int = 3,
                  theta_deg: float = 5.0) -> dict:
    rgb = natural_image(0, width=width, height=height)
    flat = np.ascontiguousarray(rgb_raster_to_hsi(rgb).reshape(-1, 3))
    bins = quantize_gray(rgb_raster_to_hsi(rgb)[:, :, 2], 64)
    cos_theta = math.cos(math.radians(theta_deg))

    results: dict = {"width": width, "height": height, "repeat": repeat,
                     "compiled_available": _speedups is not None}

    py_labels, *_ = _kernels_py.assign_color_segments(flat, cos_theta)
    results["segments"] = int(py_labels.max()) + 1
    results["assign_python_s"] = _time(
        lambda: _kernels_py.assign_color_segments(flat, cos_theta), max(1, repeat // 3))
    results["cooc_python_s"] = _time(
        lambda: _kernels_py.cooc_accumulate(bins, 64), repeat)

    if _speedups is not None:
        cy_labels, *_ = _speedups.assign_color_segments(flat, cos_theta)
        results["outputs_match"] = bool(np.array_equal(py_labels, cy_labels))
        results["assign_compiled_s"] = _time(
            lambda: _speedups.assign_color_segments(flat, cos_theta), repeat)
        results["cooc_compiled_s"] = _time(
            lambda: _speedups.cooc_accumulate(bins, 64), repeat)
        results["assign_speedup"] = results["assign_python_s"] / results["assign_compiled_s"]
        results["cooc_speedup"] = results["cooc_python_s"] / results["cooc_compiled_s"]
    return results


def format_report(res: dict) -> str:
    lines = [
        f"kernel benchmark on a {res['width']}x{res['height']} synthetic frame "
        f"({res['segments']} color segments)",
        f"  color assignment  python   {res['assign_python_s'] * 1000:9.1f} ms",
    ]
    if res["compiled_available"]:
        lines += [
            f"  color assignment  compiled {res['assign_compiled_s'] * 1000:9.1f} ms"
            f"   ({res['assign_speedup']:.0f}x)",
            f"  cooccurrence      python   {res['cooc_python_s'] * 1000:9.1f} ms",
            f"  cooccurrence      compiled {res['cooc_compiled_s'] * 1000:9.1f} ms"
            f"   ({res['cooc_speedup']:.0f}x)",
            f"  outputs match: {res['outputs_match']}",
        ]
    else:
        lines += [
            f"  cooccurrence      python   {res['cooc_python_s'] * 1000:9.1f} ms",
            "  compiled extension not available (pure-Python fallback active)",
        ]
    return "\n".join(lines)
