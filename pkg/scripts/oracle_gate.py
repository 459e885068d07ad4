#!/usr/bin/env python3
"""Run the finite-field gate over the bundled fans.

Every configuration class and every map-space class within an entry
box is evaluated at L = p and compared against the brute-force count.
Any mismatch is a correctness bug somewhere between the Euler-product
engine and the enumerative counter, so the script exits nonzero on the
first discrepancy summary.

    python scripts/oracle_gate.py                 # default box, p in {2,3}
    python scripts/oracle_gate.py --fans p2 dp6 --limit 2 --jobs 4
"""

import argparse
import itertools
import pathlib
import sys
import time

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from toricurves import FIXTURE_NAMES, fixture_fan
from toricurves.grothendieck import evaluate
from toricurves.moduli import hom_class, pattern_config_class
from toricurves.oracle import ff_hom_count, ff_pattern_count
from toricurves.toric import eff_dual_contains


def gate_fan(name, primes, limit, jobs, budget):
    fan = fixture_fan(name)
    top = limit if limit is not None else (3 if fan.nrays <= 4 else 2)
    mismatches = []
    n_config = n_hom = 0
    start = time.perf_counter()
    for e in itertools.product(range(top + 1), repeat=fan.nrays):
        for p in primes:
            brute = ff_pattern_count(p, fan, e, budget=budget, jobs=jobs)
            predicted = evaluate(pattern_config_class(fan, e), p)
            n_config += 1
            if brute != predicted:
                mismatches.append(("config", e, p, brute, int(predicted)))
    for d in itertools.product(range(top + 1), repeat=fan.nrays):
        if not eff_dual_contains(fan, d):
            continue
        for p in primes:
            brute = ff_hom_count(p, fan, d, budget=budget, jobs=jobs)
            predicted = evaluate(hom_class(fan, d), p)
            n_hom += 1
            if brute != predicted:
                mismatches.append(("hom", d, p, brute, int(predicted)))
    elapsed = time.perf_counter() - start
    return n_config, n_hom, mismatches, elapsed


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--fans", nargs="*", default=list(FIXTURE_NAMES),
                        choices=FIXTURE_NAMES, metavar="FAN",
                        help="fixtures to gate (default: all)")
    parser.add_argument("--primes", nargs="*", type=int, default=[2, 3])
    parser.add_argument("--limit", type=int, default=None,
                        help="entry box top (default 3 for <=4 rays, else 2)")
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--budget", type=int, default=None)
    args = parser.parse_args(argv)

    bad = 0
    for name in args.fans:
        n_config, n_hom, mismatches, elapsed = gate_fan(
            name, args.primes, args.limit, args.jobs, args.budget
        )
        verdict = "ok" if not mismatches else f"{len(mismatches)} MISMATCHES"
        print(f"{name:>6}: {n_config} config + {n_hom} hom counts "
              f"in {elapsed:6.1f}s  {verdict}")
        for kind, vec, p, brute, predicted in mismatches[:5]:
            print(f"        {kind} {vec} p={p}: brute {brute} "
                  f"!= predicted {predicted}")
        bad += len(mismatches)
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
