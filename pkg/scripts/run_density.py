"""Stabilise random (partly seeded) Fourier fields and report the distance moved."""
import argparse
import time
from collections import Counter

from circlestab.suites import SuiteConfig, run_density


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--eps", type=float, default=1e-3)
    args = ap.parse_args()

    t0 = time.perf_counter()
    trials = run_density(SuiteConfig(trials=args.trials, seed=args.seed, eps=args.eps))
    for t in trials:
        if t.seeded or not t.passed:
            print(f"#{t.index:3d} seeded={t.seeded!s:5} {t.verdict_before:>22} -> {t.verdict_after:<20} "
                  f"dist={t.distance:.3g} steps={t.steps} {t.error or ''}")
    before = Counter(t.verdict_before for t in trials)
    print(f"\nverdicts before: {dict(before)}")
    print(f"{sum(t.passed for t in trials)}/{len(trials)} stabilised within eps={args.eps:g}; "
          f"max distance {max(t.distance for t in trials):.3g}; {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
