"""Monte Carlo chromatic-number runs, moment-ratio sweeps and CSV/JSON output.

Trial ``i`` of a run with master seed ``s`` samples its graph from the stream
``derive_seed(s, i)``, so a record depends only on ``(parameters, s, i)`` and
trials may be computed in any order or in parallel.

In G(n, m) runs the density parameter is ``c = d/2`` with ``m = floor(c n)``,
and band membership is judged against ``predicted_band(2c)``.  Loops and
repeated edges are dropped before coloring.

CSV columns for chi records, in order::

    model,n,d,m,c,seed,trial,chi,in_band,exact_hit,runtime,censored

``m`` and ``c`` are empty for G(n, p) runs; ``chi``, ``in_band`` and
``exact_hit`` are empty for censored trials and ``exact_hit`` is also empty
when the band has no exact prediction.  Booleans are written ``true``/``false``.
"""
from __future__ import annotations

import csv
import io
import json
import os
import sys
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from typing import Iterable, Iterator

from .coloring import chromatic_number
from .errors import InfeasibleError, SolverTimeout
from .graphs import derive_seed, sample_gnm, sample_gnp, simplify
from .moments import ENUMERATION_LIMIT, edges_for_density, second_moment_ratio
from .thresholds import predicted_band

OUTPUT_DIR_ENV = "CHROMLAB_OUTPUT_DIR"
DEFAULT_TIME_BUDGET = 60.0
MAX_N = 400
MAX_D = 10.0
MODELS = ("gnp", "gnm")


@dataclass(frozen=True)
class ExperimentRecord:
    model: str
    n: int
    d: float
    m: int | None
    c: float | None
    seed: int
    trial: int
    chi: int | None
    in_band: bool | None
    exact_hit: bool | None
    runtime: float
    censored: bool


@dataclass(frozen=True)
class SweepRow:
    k: int
    c: float
    n: int
    m: int
    ratio: float
    ratio_numerator: str
    ratio_denominator: str
    pz_bound: float


# ------------------------------------------------------------ chi experiments

def _guard(n: int, d: float, max_n: int, max_d: float) -> None:
    if n <= max_n and d <= max_d:
        return
    sugg_n = min(n, max_n)
    sugg_d = min(d, max_d)
    raise InfeasibleError(
        f"n={n}, d={d} exceeds the exact-solver guard (n <= {max_n}, d <= {max_d}); "
        f"try n={sugg_n}, d={sugg_d}, or raise max_n/max_d knowing single trials may be censored")


def _one_trial(model: str, n: int, d: float, seed: int, trial: int,
               time_budget: float | None) -> ExperimentRecord:
    s = derive_seed(seed, trial)
    if model == "gnp":
        g = sample_gnp(n, d / n, s)
        m = c = None
        band = predicted_band(d)
    else:
        c = d / 2
        m = edges_for_density(c, n)
        g, _ = simplify(sample_gnm(n, m, s))
        band = predicted_band(2 * c)
    t0 = time.perf_counter()
    try:
        chi = chromatic_number(g, time_budget=time_budget)
    except SolverTimeout:
        return ExperimentRecord(model, n, float(d), m, c, seed, trial, None, None, None,
                                time.perf_counter() - t0, True)
    runtime = time.perf_counter() - t0
    exact_hit = None if band.exact is None else chi == band.exact
    return ExperimentRecord(model, n, float(d), m, c, seed, trial, chi, chi in band,
                            exact_hit, runtime, False)


def _star_trial(args):
    return _one_trial(*args)


def run_chi_experiment(n: int, d: float, trials: int, seed: int, *, model: str = "gnp",
                       time_budget: float | None = DEFAULT_TIME_BUDGET,
                       max_n: int = MAX_N, max_d: float = MAX_D,
                       workers: int = 1) -> Iterator[ExperimentRecord]:
    """Yield one record per trial, in trial order.

    A trial whose chromatic number is not settled within ``time_budget``
    seconds is recorded as censored.  ``workers > 1`` spreads trials over
    processes without changing any record except ``runtime``.
    """
    if model not in MODELS:
        raise ValueError(f"model must be one of {MODELS}, got {model!r}")
    if n < 1 or trials < 0:
        raise ValueError(f"need n >= 1 and trials >= 0 (n={n}, trials={trials})")
    if not d > 0:
        raise ValueError(f"d must be positive, got {d}")
    if model == "gnp" and d > n:
        raise ValueError(f"d/n must be a probability (d={d}, n={n})")
    _guard(n, d, max_n, max_d)
    jobs = [(model, n, d, seed, t, time_budget) for t in range(trials)]
    if workers <= 1:
        for job in jobs:
            yield _one_trial(*job)
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        yield from pool.map(_star_trial, jobs)


def summarize(records: Iterable[ExperimentRecord]) -> dict:
    """Empirical chi frequencies and band fractions.  Censored trials count
    in the denominator but never as hits."""
    records = list(records)
    total = len(records)
    chis = Counter(r.chi for r in records if not r.censored)
    censored = sum(r.censored for r in records)
    in_band = sum(bool(r.in_band) for r in records)
    exact = sum(bool(r.exact_hit) for r in records)
    has_exact = any(r.exact_hit is not None for r in records)
    return {
        "trials": total,
        "censored": censored,
        "chi_counts": {str(k): v for k, v in sorted(chis.items())},
        "in_band_fraction": in_band / total if total else None,
        "exact_fraction": exact / total if has_exact else None,
        "runtime_total": sum(r.runtime for r in records),
    }


# ------------------------------------------------------------ moment sweeps

@dataclass(frozen=True)
class MomentSweep:
    k: int
    ns: tuple[int, ...]
    cs: tuple[float, ...]
    rows: tuple[SweepRow, ...]
    increasing: dict  # c -> ratio strictly increasing in n
    exploding: dict  # c -> increasing and grew by at least ``growth`` over the n range
    explosion_c: float | None  # smallest grid c from which every larger c is exploding
    growth: float = 2.0

    def ratios(self, c: float) -> list[float]:
        return [r.ratio for r in self.rows if r.c == c]


def run_moment_sweep(k: int, ns: Iterable[int], cs: Iterable[float], *, growth: float = 2.0,
                     limit: int = ENUMERATION_LIMIT) -> MomentSweep:
    """Exact E[Z^2]/E[Z]^2 over the grid ``ns`` x ``cs``.

    A bounded sequence can still increase strictly at small n, so a column
    counts as exploding only if it also grows by a factor ``growth`` between
    the smallest and largest n.
    """
    ns = tuple(sorted(ns))
    cs = tuple(sorted(cs))
    rows = []
    increasing = {}
    exploding = {}
    for c in cs:
        seq = []
        for n in ns:
            mr = second_moment_ratio(n, k, c, limit=limit)
            rows.append(SweepRow(k, float(c), n, mr.m, float(mr.ratio),
                                 str(mr.ratio.numerator), str(mr.ratio.denominator),
                                 float(mr.pz_bound)))
            seq.append(mr.ratio)
        up = len(seq) > 1 and all(a < b for a, b in zip(seq, seq[1:]))
        increasing[float(c)] = up
        exploding[float(c)] = up and seq[-1] >= growth * seq[0]
    explosion = None
    for c in reversed(cs):
        if not exploding[float(c)]:
            break
        explosion = float(c)
    return MomentSweep(k, ns, cs, tuple(rows), increasing, exploding, explosion, growth)


# ------------------------------------------------------------ emission

_TYPES = {ExperimentRecord: "chi", SweepRow: "moments"}


def columns(record_type=ExperimentRecord) -> list[str]:
    return [f.name for f in fields(record_type)]


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return repr(v) if isinstance(v, float) else str(v)


def _render(records, fmt: str, record_type) -> str:
    if fmt == "json":
        return json.dumps([asdict(r) for r in records], indent=1) + "\n"
    if fmt != "csv":
        raise ValueError(f"format must be 'csv' or 'json', got {fmt!r}")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns(record_type))
    for r in records:
        w.writerow([_csv_cell(getattr(r, name)) for name in columns(record_type)])
    return buf.getvalue()


def emit(records: Iterable, fmt: str = "csv", path: str | os.PathLike | None = None, *,
         record_type=None) -> None:
    """Write records as CSV or a JSON array to ``path`` (stdout for ``None`` or ``"-"``).

    ``record_type`` fixes the CSV header for an empty stream; otherwise it is
    taken from the first record.
    """
    records = list(records)
    if record_type is None:
        record_type = type(records[0]) if records else ExperimentRecord
    if record_type not in _TYPES:
        raise TypeError(f"cannot emit records of type {record_type.__name__}")
    text = _render(records, fmt, record_type)
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write records to {os.fspath(path)!r}: {exc.strerror or exc}") from exc


def _parse_cell(text: str, annotation: str):
    if text == "":
        return None
    if "bool" in annotation:
        if text not in ("true", "false"):
            raise ValueError(f"bad boolean {text!r}")
        return text == "true"
    if annotation.startswith("int"):
        return int(text)
    if annotation.startswith("float"):
        return float(text)
    return text


def loads_records(text: str, fmt: str = "csv", record_type=ExperimentRecord) -> list:
    if fmt == "json":
        return [record_type(**row) for row in json.loads(text)]
    if fmt != "csv":
        raise ValueError(f"format must be 'csv' or 'json', got {fmt!r}")
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    expected = columns(record_type)
    if header != expected:
        raise ValueError(f"unexpected CSV header {header}; expected {expected}")
    kinds = {f.name: str(f.type) for f in fields(record_type)}
    return [record_type(**{name: _parse_cell(cell, kinds[name]) for name, cell in zip(header, row)})
            for row in reader]


def read_records(path: str | os.PathLike, fmt: str = "csv", record_type=ExperimentRecord) -> list:
    try:
        with open(path, newline="") as fh:
            text = fh.read()
    except OSError as exc:
        raise OSError(f"cannot read records from {os.fspath(path)!r}: {exc.strerror or exc}") from exc
    return loads_records(text, fmt, record_type)


def default_output_path(name: str, fmt: str) -> str | None:
    """``$CHROMLAB_OUTPUT_DIR/<name>.<fmt>`` when the variable is set, else ``None`` (stdout)."""
    root = os.environ.get(OUTPUT_DIR_ENV)
    if not root:
        return None
    os.makedirs(root, exist_ok=True)
    return os.path.join(root, f"{name}.{fmt}")
