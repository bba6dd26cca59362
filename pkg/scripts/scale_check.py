"""Time soft-impute on a sparse random binary matrix.

Usage: python3 scripts/scale_check.py [--rows 500] [--cols 400] [--iterations 100]
"""

import argparse
import time

import numpy as np

from impsum.cooccurrence import CooccurrenceMatrix
from impsum.softimpute import ImputeConfig, soft_impute


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--rows", type=int, default=500)
    parser.add_argument("--cols", type=int, default=400)
    parser.add_argument("--iterations", type=int, default=100)
    parser.add_argument("--density", type=float, default=0.03)
    parser.add_argument("--lam", type=float, default=1.0)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    a = (rng.random((args.rows, args.cols)) < args.density).astype(float)
    config = ImputeConfig(lam=args.lam, max_iterations=args.iterations, rel_tolerance=1e-300)
    start = time.perf_counter()
    result = soft_impute(CooccurrenceMatrix(a), config)
    elapsed = time.perf_counter() - start
    print(f"{args.rows}x{args.cols}, {result.iterations_run} iterations: {elapsed:.2f}s "
          f"({1000 * elapsed / result.iterations_run:.1f} ms/iteration), objective {result.final_objective:.4f}")


if __name__ == "__main__":
    main()
