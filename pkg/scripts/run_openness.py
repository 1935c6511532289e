"""Perturb random stable Fourier fields inside their robustness radius and tabulate the outcome."""
import argparse
import time

from circlestab.suites import SuiteConfig, run_openness


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    t0 = time.perf_counter()
    trials = run_openness(SuiteConfig(trials=args.trials, seed=args.seed))
    print(f"{'idx':>4} {'zeros':>5} {'radius':>10} {'|p|_1':>10} {'ratio':>6}  ok")
    for t in trials:
        print(f"{t.index:4d} {t.fixed_points:5d} {t.radius:10.4g} {t.perturbation_norm:10.4g} "
              f"{t.perturbation_norm / t.radius:6.3f}  {t.passed}")
    passed = sum(t.passed for t in trials)
    print(f"\n{passed}/{len(trials)} portraits preserved in {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
