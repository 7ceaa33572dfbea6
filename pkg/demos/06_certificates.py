"""End-to-end certification of the whole catalog.

Each theorem is a hypothesis -> conclusion consistency check over measured
field extremes.  "consistent" means the surface satisfies the conclusion
wherever the hypothesis holds, with the margin shown; "inapplicable" means
the hypothesis is not triggered; "violated" never happens for a genuine
minimal surface (and hard-fails the run if it does).
"""

from minimal_gap_lab.gaps import certify
from minimal_gap_lab.geoquad import build_grid, evaluate_fields, integral_report
from minimal_gap_lab.surfaces import CATALOG_NAMES, load_immersion

for name in CATALOG_NAMES:
    spec = load_immersion(name)
    res = (32, 64) if spec.chart == "sphere" else (32, 32)
    grid = build_grid(spec, res)
    fields = evaluate_fields(spec, grid)
    report = integral_report(spec, grid, fields)
    cert = certify(spec, fields, report)
    print(f"== {name} ==")
    for entry in cert.entries:
        margin = "" if entry.margin is None else f"  margin {entry.margin:+.3e}"
        print(f"  {entry.theorem:18s} {entry.verdict:12s}{margin}")
        if entry.notes:
            print(f"  {'':18s} note: {entry.notes}")
    print()
