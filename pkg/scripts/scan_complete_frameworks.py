"""Run the vicinity -> framework pipeline on complete (1,3)-graphs of growing size.

Reports, per t, which of V1-V6 and F1-F5 hold at the given (alpha, gamma,
delta) and how long the run took.  At t = 3 every link is a single edge,
so the switcher and intersection clauses fail; from t = 6 on everything
passes at the default parameters.

    python3 scripts/scan_complete_frameworks.py --sizes 6 9 12 15 18 21
"""

import argparse
import json
import time
from fractions import Fraction

from rainbowtight.core import OneKGraph
from rainbowtight.framework import pipeline_vicinity_to_framework


def scan(sizes, alpha, gamma, delta):
    rows = []
    for t in sizes:
        start = time.perf_counter()
        rep = pipeline_vicinity_to_framework(OneKGraph.complete(t, 3), alpha, gamma, delta)
        rows.append({
            "t": t,
            "V": {name: c.holds for name, c in rep.vicinity.clauses.items()},
            "F": {name: rep.framework.clause(name) for name in ("F1", "F2", "F3", "F4", "F5")},
            "implicationsHold": rep.implications_hold,
            "seconds": round(time.perf_counter() - start, 2),
        })
    return rows


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=[6, 9, 12, 15])
    p.add_argument("--alpha", type=Fraction, default=Fraction(1, 20))
    p.add_argument("--gamma", type=Fraction, default=Fraction(1, 100))
    p.add_argument("--delta", type=Fraction, default=Fraction(5, 9))
    args = p.parse_args()
    print(json.dumps(scan(args.sizes, args.alpha, args.gamma, args.delta), indent=2))


if __name__ == "__main__":
    main()
