"""
Flat-file writers for every data product.

CSV files start with a single ``# config: {...}`` line holding the resolved
run configuration as JSON, followed by a header row. Read them with
``pandas.read_csv(path, comment="#")`` or :func:`read_csv`.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Dict, Iterable, Optional, Sequence

import numpy as np

FIT_KEYS = ("decay_scale", "log_intercept", "fit_lo", "fit_hi", "r_squared", "n_points")


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, np.integer):
        return str(int(v))
    return v


def write_csv(path, columns: Dict[str, Sequence], config: Optional[dict] = None) -> Path:
    """Write equal-length ``columns`` as CSV, in the order given."""
    path = Path(path)
    names = list(columns)
    lengths = {len(columns[n]) for n in names}
    if len(lengths) > 1:
        raise ValueError(f"columns have unequal lengths {sorted(lengths)}")
    with path.open("w", newline="") as fh:
        if config is not None:
            fh.write("# config: " + json.dumps(config, sort_keys=True) + "\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(names)
        for row in zip(*(columns[n] for n in names)):
            w.writerow([_fmt(v) for v in row])
    return path


def read_csv(path):
    """Return ``(config, columns)`` from a file written by :func:`write_csv`."""
    config = None
    with Path(path).open() as fh:
        lines = fh.read().splitlines()
    if lines and lines[0].startswith("# config: "):
        config = json.loads(lines[0][len("# config: "):])
        lines = lines[1:]
    rows = list(csv.reader(lines))
    header, body = rows[0], rows[1:]
    cols = {h: [r[i] for r in body] for i, h in enumerate(header)}
    return config, cols


def write_json(path, payload: dict) -> Path:
    path = Path(path)
    path.write_text(json.dumps(payload, indent=2, default=_json_default) + "\n")
    return path


def _json_default(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"cannot serialize {type(o).__name__}")


def write_primes_txt(path, primes: Iterable[int]) -> Path:
    path = Path(path)
    path.write_text("".join(f"{int(p)}\n" for p in primes))
    return path


def write_primes_csv(path, primes, config=None) -> Path:
    return write_csv(path, {"prime": [int(p) for p in primes]}, config)


def write_gaps_csv(path, gaps, config=None) -> Path:
    gaps = [int(g) for g in gaps]
    return write_csv(path, {"index": list(range(len(gaps))), "gap": gaps}, config)


def write_signal_csv(path, signal, config=None) -> Path:
    return write_csv(path, {"n": signal.n.tolist(), "v": signal.values.tolist()}, config)
