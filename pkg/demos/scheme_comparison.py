"""Compare probe and measurement classes for three phase passes.

Each row is a live optimization. The default budget is small so the script
finishes in about a minute; pass a restart count to tighten it.
"""

import sys

from hlphase.schemes import table2_report

restarts = int(sys.argv[1]) if len(sys.argv) > 1 else 40
for row in table2_report(restarts=restarts, seed=1):
    flags = (
        f"sym={'y' if row.symmetric_entanglement else 'n'} "
        f"multipass={'y' if row.multipass else 'n'} "
        f"adaptive={'y' if row.adaptive else 'n'}"
    )
    tag = "" if row.reproduced else "  (reported measurement, not recomputed)"
    print(f"{flags:34s} {row.variance:.6f}  ref {row.reference:.6f}  [{row.source}]{tag}")
