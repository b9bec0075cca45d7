#!/usr/bin/env python3
"""Survey the truncated de Rham-Witt model of the affine line.

Builds the weight-truncated model for a few primes, runs every checker,
and tabulates the level-r quotient factors against the cohomology of the
mod-p^r reduction (weights are matched through the p^r scaling of the
comparison map).

Usage: python scripts/a1_model_report.py [--p 2] [--wmax 6] [--N 4]
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from wittcert.dieudonne import (
    a1_model,
    check_axioms,
    compare_wr_with_cohomology,
    f_cancellation_check,
    frobenius_injectivity_degree0_check,
    hn_mod_pr,
    saturation_witness,
    w1_vanishing_propagation_check,
    wr_quotient,
)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--p", type=int, default=2)
    parser.add_argument("--wmax", type=int, default=6)
    parser.add_argument("--N", type=int, default=4)
    args = parser.parse_args()

    model = a1_model(args.p, args.wmax, args.N)
    print(f"A^1 model: p={args.p} wmax={args.wmax} N={args.N} "
          f"({len(model.basis)} basis elements)")

    reports = [check_axioms(model), saturation_witness(model),
               frobenius_injectivity_degree0_check(model)]
    for r in range(1, args.N):
        reports.append(f_cancellation_check(model, r))
        for degree in (0, 1):
            reports.append(compare_wr_with_cohomology(model, degree, r))
    for degree in (0, 1):
        reports.append(w1_vanishing_propagation_check(model, degree, args.N - 1))
    for report in reports:
        print(" ", report.summary())

    print("\nlevel quotients by weight (degree 0; '-' marks truncation boundary):")
    quotients = {r: wr_quotient(model, 0, r) for r in range(1, args.N)}
    cohomology = {r: hn_mod_pr(model, 0, r) for r in range(1, args.N)}
    weights = sorted(quotients[1].blocks)
    header = "weight".ljust(8) + "".join(f"W_{r}".ljust(10) for r in quotients)
    print(header + "".join(f"H(mod p^{r})".ljust(12) for r in cohomology))
    for w in weights:
        if w.denominator > args.p:  # keep the table short: one fractional layer
            continue
        row = str(w).ljust(8)
        for r, q in quotients.items():
            block = q.blocks[w]
            cell = str(list(block.factors)) if block.complete else "-"
            row += cell.ljust(10)
        for r in cohomology:
            shifted = w * args.p ** r
            cell = str(list(cohomology[r].factors_at(shifted))) if shifted <= model.weight_cap else "-"
            row += cell.ljust(12)
        print(row)
    return 0 if all(r.passed for r in reports) else 1


if __name__ == "__main__":
    sys.exit(main())
