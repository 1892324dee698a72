#!/usr/bin/env python3
"""Compare the compiled kernel extension against the pure-Python fallback.

Usage:
    python benchmarks/bench_kernels.py [--width W] [--height H] [--repeat N]

Same entry point as `novascout bench`.
"""

import argparse

from novascout.bench import format_report, run_benchmark


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--width", type=int, default=640)
    parser.add_argument("--height", type=int, default=480)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    print(format_report(run_benchmark(args.width, args.height, args.repeat)))


if __name__ == "__main__":
    main()
