"""A small Monte Carlo run written as CSV, read back and summarized."""
import json
import tempfile
from pathlib import Path

from chromlab.experiments import emit, read_records, run_chi_experiment, summarize

recs = list(run_chi_experiment(120, 4.5, 25, seed=11, model="gnm"))
with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "run.csv"
    emit(recs, "csv", path)
    print(path.read_text().splitlines()[0])
    back = read_records(path)
print(json.dumps(summarize(back), indent=1))
