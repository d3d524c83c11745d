#!/usr/bin/env python3
"""Run the default property suites over the standard sweep and print a table.

    python3 scripts/sweep.py --trials 20 --seed 42
"""

import argparse
import time

from omnilie.properties import SuiteConfig, default_suites, run_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--max-deg", type=int, default=2)
    args = ap.parse_args()

    configs = [(m, r, n) for m in (1, 2) for r in (1, 2) for n in range(1, m + 2)]
    names = default_suites()
    width = max(map(len, names))
    print(f"{'suite':<{width}}  " + "  ".join(f"{m}{r}{n}" for m, r, n in configs))
    t0 = time.perf_counter()
    failed = 0
    for name in names:
        cells = []
        for m, r, n in configs:
            out = run_suite(name, SuiteConfig(m, r, n, args.seed, args.trials, args.max_deg))
            if out.skipped:
                cells.append("  -")
            elif out.ok:
                cells.append(" ok")
            else:
                cells.append("BAD")
                failed += 1
        print(f"{name:<{width}}  " + "  ".join(cells))
    print(f"\ncolumns are m r n; '-' = not applicable; {failed} failing cells; {time.perf_counter() - t0:.1f}s")
    return 1 if failed else 0


if __name__ == "__main__":
    raise SystemExit(main())
