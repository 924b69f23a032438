"""Compare the compiled DTW kernel against the pure-Python fallback.

Usage: python3 benchmarks/kernel_bench.py [--m 48] [--calls 2000]

Both kernels execute the identical operation sequence, so besides speed
this also spot-checks that their results agree bit for bit.
"""

import argparse

from rmstream._kernels import KERNEL_NAME, dtw_cost, dtw_cost_python
from rmstream.experiments import kernel_comparison
from rmstream.data_io import SyntheticScenario, generate_synthetic


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--m", type=int, default=48, help="pattern length")
    parser.add_argument("--calls", type=int, default=2000, help="calls per kernel")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    print(f"active kernel: {KERNEL_NAME}")
    if KERNEL_NAME != "compiled":
        print("compiled kernel unavailable; timing the fallback only")

    days = generate_synthetic(SyntheticScenario(
        archetype="solar", days=2, m=args.m, noise=0.05, seed=args.seed))
    a, b = days[0].values, days[1].values
    weights = (1.0,) * args.m
    for band in (-1, args.m // 8):
        for squared in (False, True):
            compiled = dtw_cost(a, b, weights, band, squared)
            fallback = dtw_cost_python(a, b, weights, band, squared)
            assert compiled == fallback, (band, squared, compiled, fallback)
    print("bit-identical agreement: ok")

    rows = kernel_comparison(m=args.m, calls=args.calls, seed=args.seed)
    per_call = {row["kernel"]: row["seconds_per_call"] for row in rows}
    for name, seconds in per_call.items():
        print(f"{name:>9}: {seconds * 1e6:8.2f} us/call ({args.calls} calls, m={args.m})")
    if "compiled" in per_call:
        print(f"speedup: {per_call['python'] / per_call['compiled']:.1f}x")


if __name__ == "__main__":
    main()
