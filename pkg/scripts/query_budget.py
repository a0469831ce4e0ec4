"""Tabulate Robertson-Webb query counts per pipeline stage against n^2.

    python3 scripts/query_budget.py --count 200 --max-agents 6
"""

from __future__ import annotations

import argparse
import random
from collections import defaultdict

from mixedmms import generate_random, mixed_mms


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--count", type=int, default=200)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--max-agents", type=int, default=6)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    per_n: dict[int, list[int]] = defaultdict(list)
    for _ in range(args.count):
        n = rng.randint(2, args.max_agents)
        inst = generate_random(rng.randrange(2**32), n, rng.randint(0, 6), cake_segments=4)
        if not inst.has_cake:
            continue
        report = mixed_mms(inst)
        outside = sum(c for s, kinds in report.queries.items() if s != "wpr" for c in kinds.values())
        per_n[n].append(outside)
    print(" n  runs  max-queries  max/n^2")
    for n in sorted(per_n):
        worst = max(per_n[n])
        print(f"{n:2d}  {len(per_n[n]):4d}  {worst:11d}  {worst / n**2:7.2f}")


if __name__ == "__main__":
    main()
