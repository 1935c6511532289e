"""Compare the candidate closed-form bump bound with the measured and exact C^1 norms."""
import argparse

import numpy as np

from circlestab import BumpPsi, CircleField, c1_norm, psi_norm_bound, psi_norm_exact


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--count", type=int, default=20)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    print(f"{'a':>7} {'b-a':>7} {'grid':>10} {'exact':>10} {'bound':>10} {'grid/bound':>10}")
    widths = np.concatenate(([1.0], rng.uniform(0.05, 0.9, args.count)))
    for w in widths:
        a = float(rng.uniform(0, 1))
        est = c1_norm(CircleField((BumpPsi(a, a + w),)), 16384).c1
        exact, bound = psi_norm_exact(a, a + w), psi_norm_bound(a, a + w)
        print(f"{a:7.3f} {w:7.3f} {est:10.5f} {exact:10.5f} {bound:10.5f} {est / bound:10.3f}")
    # the reference interval (-1, 1) of the real-line bump
    print(f"\n(-1, 1): exact {psi_norm_exact(-1, 1):.6f} vs bound {psi_norm_bound(-1, 1):.6f}")


if __name__ == "__main__":
    main()
