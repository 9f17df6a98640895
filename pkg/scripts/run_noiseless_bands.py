#!/usr/bin/env python3
"""Noiseless band-structure experiment over the bundled Si fixtures.

Runs the selected-CI pipeline (ideal sampling, R=50, post-selected) and the
exact-reference pipeline at every committed k-point, then prints per-band
deviations.  Writes both run directories plus a comparison report.

Expected runtime on one core: ~25 minutes (dominated by the per-k VQE).
"""
import argparse
import json
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from qsciband.cli import RunConfig, compare_runs, run_pipeline

FIXTURES = sorted(str(p) for p in (ROOT / "fixtures").glob("si_*.json"))


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="runs/noiseless_bands")
    parser.add_argument("--r", type=int, default=50)
    parser.add_argument("--iterations", type=int, default=200)
    args = parser.parse_args()
    out = pathlib.Path(args.out)

    base = {
        "hamiltonians": FIXTURES,
        "post_select": True,
        "r": args.r,
        "vqe": {
            "depth": 3,
            "max_iterations": args.iterations,
            "snapshot_iteration": args.iterations,
            "seed": 0,
        },
    }
    qsci_config = RunConfig.from_dict(
        {**base, "mode": "qsci", "sampling": {"kind": "ideal"}, "output_dir": str(out / "qsci")}
    )
    fci_config = RunConfig.from_dict(
        {**base, "mode": "fci-reference", "output_dir": str(out / "fci")}
    )

    print(f"running selected-CI pipeline over {len(FIXTURES)} k-points ...")
    assert run_pipeline(qsci_config) == 0
    print("running exact-reference pipeline ...")
    assert run_pipeline(fci_config) == 0

    report = compare_runs(out / "qsci", out / "fci")
    (out / "comparison.json").write_text(json.dumps(report, indent=1, sort_keys=True))

    print(f"\n{'k':8s} {'dE_ground':>12s} {'max|d valence|':>15s} {'max|d conduction|':>18s}")
    for label, entry in report["per_k"].items():
        dv = max(abs(d) for d in entry["valence_deltas"])
        dc = max(abs(d) for d in entry["conduction_deltas"])
        print(f"{label:8s} {entry['energy_delta']:12.3e} {dv:15.3e} {dc:18.3e}")
    print(f"\nartifacts in {out}/")


if __name__ == "__main__":
    main()
