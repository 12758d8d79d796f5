"""Run a miniature request-probability sweep and inspect the CSV.

The checked-in configs under experiments/ are the full-size versions of
this; the CSV schema is what the plotting package consumes.
"""

import tempfile
from pathlib import Path

from hubfleet import ScenarioConfig
from hubfleet.experiments import SweepSpec, run_sweep
from hubfleet.metrics import CSV_COLUMNS, read_csv

out = Path(tempfile.mkdtemp()) / "mini_sweep.csv"
spec = SweepSpec(
    base=ScenarioConfig(horizon=150, seed=0),
    axis="p_new",
    values=(0.5, 1.0),
    trials=5,
    policies=("ibr", "edd"),
    output_path=str(out),
)
records = run_sweep(spec, workers=2)
print(f"wrote {len(records)} rows to {out}\n")
print("columns:", ", ".join(CSV_COLUMNS), "\n")

rows = read_csv(out)
for row in rows[:6]:
    print(f"  {row['policy']:4s} p_new={row['p_new']} seed={row['seed']} "
          f"late={float(row['fraction_late']):.3f} welfare={row['welfare']}")
print("  ...")

by_cell = {}
for row in rows:
    by_cell.setdefault((row["policy"], row["p_new"]), []).append(
        float(row["fraction_late"])
    )
print("\nmean fraction late per cell:")
for (policy, p_new), vals in sorted(by_cell.items()):
    print(f"  {policy:4s} p_new={p_new}: {sum(vals) / len(vals):.4f}")
