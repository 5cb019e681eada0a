"""
Searching for violations when f is not convex
=============================================

Random commuting tuples and unit vectors are tried in a fixed order; the
first violation is replayed through the conditional check before it is
accepted.
"""

from opjensen.convexfn import midpoint_convexity_probe, parse
from opjensen.jensen import check_conditional, search_counterexample
from opjensen.jointspec import CubeDomain

for text, dom in [("x1^3", CubeDomain(((-2, 2),))),
                  ("x1*x2", CubeDomain.uniform(-1, 1, 2)),
                  ("x1^2", CubeDomain(((-2, 2),)))]:
    f = parse(text, dom.n)
    probe = midpoint_convexity_probe(f, dom, samples=10_000, seed=0)
    w = search_counterexample(f, dom, dims=(2, 3), trials=1000, seed=1)
    if w is None:
        print(f"{text:6s} probe: {probe.status:16s} search: none in 1000 trials")
        continue
    replay = check_conditional(w.instance).atom(0)
    print(f"{text:6s} probe: {probe.status:16s} search: trial {w.trial}, d={w.tuple.dim}, "
          f"margin {w.report.min_margin:.4f} (replayed {replay.margin:.4f})")
