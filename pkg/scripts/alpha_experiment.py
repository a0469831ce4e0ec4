"""Run the mixed MMS pipeline over a seeded random corpus and summarise the ratios.

    python3 scripts/alpha_experiment.py --count 300 --seed 2024 --epsilon 1/10 -o alpha.json
"""

from __future__ import annotations

import argparse
import statistics
import time
from fractions import Fraction

from mixedmms import APPROXIMATE, EXACT, mixed_mms, parse_rational, random_corpus
from mixedmms.io import write_json


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--count", type=int, default=300)
    parser.add_argument("--seed", type=int, default=2024)
    parser.add_argument("--max-goods", type=int, default=8)
    parser.add_argument("--segments", type=int, default=4)
    parser.add_argument("--epsilon", type=parse_rational, help="also run approximate mode at this epsilon")
    parser.add_argument("-o", "--output")
    args = parser.parse_args()

    corpus = random_corpus(args.count, seed=args.seed, max_goods=args.max_goods, cake_segments=args.segments)
    modes = [(EXACT, None)] + ([(APPROXIMATE, args.epsilon)] if args.epsilon is not None else [])
    summary = {"count": args.count, "seed": args.seed, "modes": {}}
    for mode, eps in modes:
        start = time.perf_counter()
        alphas, slack, violations = [], [], 0
        for inst in corpus:
            report = mixed_mms(inst, eps, mode)
            alphas.append(report.alpha)
            bound = report.alpha * (1 - eps if eps else 1)
            ratios = [r for r in report.ratios if r is not None]
            if ratios:
                slack.append(min(ratios) - bound)
            violations += sum(r < bound for r in ratios)
        elapsed = time.perf_counter() - start
        row = {
            "epsilon": eps,
            "alpha_min": min(alphas),
            "alpha_mean": float(statistics.mean(alphas)),
            "alpha_one": sum(a == 1 for a in alphas),
            "min_slack": min(slack, default=Fraction(0)),
            "violations": violations,
            "seconds": round(elapsed, 2),
        }
        summary["modes"][mode] = row
        print(f"{mode:12s} alpha min {row['alpha_min']} mean {row['alpha_mean']:.3f} "
              f"alpha=1 on {row['alpha_one']}/{args.count}, violations {violations}, {elapsed:.1f}s")
    if args.output:
        write_json(args.output, summary)


if __name__ == "__main__":
    main()
