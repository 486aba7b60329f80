"""Desk-scale directional check of the two result tables.

Runs both modes at a tenth of the full budgets (500 synthetic, 500 ground
truth) and prints one PASS/FAIL line per expected ordering: the n=500
precision ranking Wiener >= bridge > drifted, the Wiener precision floor,
recall growth with training size, and the reshuffle/retarget precision and
recall relationships.  This is the same protocol the acceptance tests run.

The final comparison (retarget recall above reshuffle recall) is a known
red with this package's least-squares inverse: width-stretched canvases are
not consistent scalograms of any series, and the faithful inverse amplifies
that inconsistency into overdispersed, origin-unpinned paths whose recall
collapses.  The acceptance test of the same name carries the full analysis.
"""

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from scalogen.pipeline import MODE_RESHUFFLE, MODE_RETARGET, run_table
from scalogen.processes import BRIDGE, DRIFTED, WIENER, ProcessSpec


def check(label, ok):
    print(f"{'PASS' if ok else 'FAIL'}  {label}")
    return bool(ok)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="desk_runs")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--k", type=int, default=3)
    ap.add_argument("--budget", type=int, default=500)
    args = ap.parse_args()

    specs = [ProcessSpec(kind=k) for k in (BRIDGE, DRIFTED, WIENER)]
    n_values = [5, 50, 500]
    tables = {}
    for mode in (MODE_RESHUFFLE, MODE_RETARGET):
        t0 = time.time()
        tables[mode] = run_table(
            specs,
            n_values,
            mode=mode,
            out_dir=Path(args.out) / mode,
            base_seed=args.seed,
            total_synthetic=args.budget,
            ground_truth_count=args.budget,
            k=args.k,
        )
        print(f"{mode} table done in {time.time() - t0:.0f}s")

    re, rt = tables[MODE_RESHUFFLE], tables[MODE_RETARGET]
    ok = True
    ok &= check(
        "reshuffle n=500 precision ordering wiener >= bridge > drifted",
        re[(WIENER, 500)].precision >= re[(BRIDGE, 500)].precision
        and re[(BRIDGE, 500)].precision > re[(DRIFTED, 500)].precision,
    )
    for n in n_values:
        ok &= check(
            f"reshuffle wiener precision >= 0.5 at n={n}",
            re[(WIENER, n)].precision >= 0.5,
        )
    for kind in (BRIDGE, WIENER):
        rec = [re[(kind, n)].recall for n in n_values]
        ok &= check(
            f"reshuffle recall nondecreasing in n for {kind}",
            rec[0] <= rec[1] <= rec[2],
        )
    for kind in (BRIDGE, DRIFTED, WIENER):
        for n in n_values:
            ok &= check(
                f"retarget precision < reshuffle precision for {kind} n={n}",
                rt[(kind, n)].precision < re[(kind, n)].precision,
            )
    for kind in (BRIDGE, WIENER):
        ok &= check(
            f"retarget recall > reshuffle recall for {kind} at n=500",
            rt[(kind, 500)].recall > re[(kind, 500)].recall,
        )
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
