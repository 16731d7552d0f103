"""Experiment grids: (k, sweep point, method) cells with reference markers.

Every cell derives its own generator seed from the configuration seed and
the cell coordinates, so results do not depend on execution order or on how
many worker processes are used.
"""
import csv
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .errors import LevSelectError
from .evaluation import error_report, lemma1_certificate
from .leverage import leverage_scores
from .matrix_core import svd
from .matrixio import load_matrix
from .selectors import (
    APPROX_BASIS,
    DETERMINISTIC,
    METHODS,
    PIVOTED_QR,
    RANDOMIZED,
    select_deterministic,
    select_randomized,
    select_top,
    stopping_count,
)
from .matrix_core import pivoted_qr
from .sketch import FREQUENT_DIRECTIONS, RANGEFINDER, frequent_directions_basis, rangefinder_basis
from .synthgen import assemble_matrix, make_spec

log = logging.getLogger(__name__)

REPORT_VERSION = "1"
ROW_FIELDS = (
    "dataset", "k", "c", "theta", "method", "spectral_ratio", "frobenius_ratio",
    "spectral_ratio_mean", "frobenius_ratio_mean", "certificate", "seed",
    "repetitions", "error",
)
MARKER_FIELDS = ("dataset", "k", "kind", "method", "norm", "c")
_METHOD_CODES = {m: i for i, m in enumerate(METHODS)}


@dataclass
class ExperimentConfig:
    k_list: list
    c_list: list = None
    theta_list: list = None
    epsilon_list: list = None
    methods: list = field(default_factory=lambda: [DETERMINISTIC, RANDOMIZED, PIVOTED_QR])
    repetitions: int = 10
    seed: int = 0
    norm: str = "both"
    input: str = None
    input_format: str = None
    synthetic: dict = None
    basis: str = FREQUENT_DIRECTIONS
    basis_epsilon: float = 0.5
    output_path: str = None
    output_format: str = "json"
    jobs: int = 1

    def __post_init__(self):
        sweeps = [s for s in (self.c_list, self.theta_list, self.epsilon_list) if s is not None]
        if len(sweeps) != 1:
            raise ValueError("give exactly one of c_list, theta_list, epsilon_list")
        if not self.k_list or not sweeps[0]:
            raise ValueError("k_list and the sweep list must be non-empty")
        for name in ("k_list", "c_list", "theta_list", "epsilon_list"):
            values = getattr(self, name)
            if values is not None and list(values) != sorted(values):
                raise ValueError(f"{name} must be sorted ascending")
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        if self.norm not in ("spectral", "frobenius", "both"):
            raise ValueError(f"unknown norm {self.norm!r}")
        if self.output_format not in ("json", "csv"):
            raise ValueError(f"unknown output format {self.output_format!r}")
        unknown = set(self.methods) - set(METHODS)
        if unknown:
            raise ValueError(f"unknown methods {sorted(unknown)}")
        if (self.input is None) == (self.synthetic is None):
            raise ValueError("give exactly one of input and synthetic")

    @property
    def sweep_kind(self):
        if self.c_list is not None:
            return "c"
        return "theta" if self.theta_list is not None else "epsilon"

    @property
    def sweep(self):
        return {"c": self.c_list, "theta": self.theta_list, "epsilon": self.epsilon_list}[self.sweep_kind]

    @classmethod
    def from_dict(cls, data):
        return cls(**data)

    def to_dict(self):
        return asdict(self)


def cell_seed(base, *coords):
    """64-bit seed derived from ``base`` and integer cell coordinates."""
    ints = [int(base)] + [int(c) for c in coords]
    return int(np.random.SeedSequence(ints).generate_state(1, dtype=np.uint64)[0])


def load_datasets(config):
    """Yield ``(name, k, A)``; synthetic inputs get one matrix per ``k``."""
    if config.input is not None:
        a = load_matrix(config.input, config.input_format)
        name = Path(config.input).stem
        for k in config.k_list:
            yield name, k, a
        return
    syn = dict(config.synthetic)
    kind = syn.pop("kind")
    m, n = int(syn.pop("m")), int(syn.pop("n"))
    alpha = syn.pop("alpha", None)
    for k in config.k_list:
        spec = make_spec(kind, m, n, k, seed=cell_seed(config.seed, k), alpha=alpha)
        name = f"synthetic-{kind}" + (f"-alpha{alpha:g}" if alpha is not None else "")
        yield name, k, assemble_matrix(spec)


def _approx_basis(a, k, config, seed):
    if config.basis == RANGEFINDER:
        return rangefinder_basis(a, k, config.basis_epsilon, seed).z
    return frequent_directions_basis(a, k, config.basis_epsilon).z


def _pick_best(reports, norm):
    """Best-of-R summary for a list of ``(report, certificate, seed)``."""
    spec = [r.spectral_ratio for r, _, _ in reports]
    frob = [r.frobenius_ratio for r, _, _ in reports]
    key = spec if norm in ("spectral", "both") else frob
    if any(x is None for x in key):
        best = 0
    else:
        best = int(np.argmin(key))
    out = {
        "spectral_ratio": reports[best][0].spectral_ratio,
        "frobenius_ratio": reports[best][0].frobenius_ratio,
        "certificate": reports[best][1],
        "seed": reports[best][2],
    }
    if norm == "both" and None not in frob:
        out["frobenius_ratio"] = float(min(frob))
    if None not in spec:
        out["spectral_ratio_mean"] = float(np.mean(spec))
    if None not in frob:
        out["frobenius_ratio_mean"] = float(np.mean(frob))
    return out


def run_cells(task):
    """Evaluate every sweep point for one ``(dataset, k, method)``."""
    config, name, k, method, a = task
    rows = []
    try:
        factors = svd(a)
        if k > factors.rank:
            raise LevSelectError(f"k={k} exceeds rank {factors.rank}")
        v_k = factors.v[:, :k]
        profile = leverage_scores(v_k, k)
        basis = v_k
        if method == APPROX_BASIS:
            basis = _approx_basis(a, k, config, cell_seed(config.seed, k, 0, _METHOD_CODES[method]))
            profile = leverage_scores(basis, k)
        perm = pivoted_qr(a)[2] if method == PIVOTED_QR else None
    except (LevSelectError, ValueError) as exc:
        return [_error_row(name, k, None, None, method, exc) for _ in config.sweep]

    for pos, point in enumerate(config.sweep):
        theta = None
        try:
            if config.sweep_kind == "c":
                c = int(point)
                if not 1 <= c <= a.shape[1]:
                    raise ValueError(f"c={c} outside [1, {a.shape[1]}]")
            else:
                theta = float(point) if config.sweep_kind == "theta" else k - float(point)
                c = select_deterministic(profile, theta).c
            if method in (DETERMINISTIC, APPROX_BASIS):
                if theta is None:
                    sel = select_top(profile, c)
                else:
                    sel = select_deterministic(profile, theta, method=method)
                rep = error_report(a, sel, k, factors)
                row = {"spectral_ratio": rep.spectral_ratio, "frobenius_ratio": rep.frobenius_ratio,
                       "certificate": lemma1_certificate(basis, sel), "seed": None}
                reps = 1
            elif method == PIVOTED_QR:
                cols = [int(i) for i in perm[:c]]
                rep = error_report(a, cols, k, factors)
                row = {"spectral_ratio": rep.spectral_ratio, "frobenius_ratio": rep.frobenius_ratio,
                       "certificate": lemma1_certificate(v_k, cols), "seed": None}
                reps = 1
            else:
                results = []
                for r in range(config.repetitions):
                    seed = cell_seed(config.seed, k, pos, _METHOD_CODES[method], r)
                    sel = select_randomized(profile, c, seed)
                    rep = error_report(a, sel, k, factors)
                    results.append((rep, lemma1_certificate(v_k, sel), seed))
                row = _pick_best(results, config.norm)
                reps = config.repetitions
            rows.append(_row(name, k, c, theta, method, reps, **row))
        except (LevSelectError, ValueError) as exc:
            rows.append(_error_row(name, k, point if theta is None else None, theta, method, exc))
    return rows


def _row(dataset, k, c, theta, method, repetitions, spectral_ratio=None, frobenius_ratio=None,
         spectral_ratio_mean=None, frobenius_ratio_mean=None, certificate=None, seed=None):
    if repetitions == 1:
        spectral_ratio_mean, frobenius_ratio_mean = spectral_ratio, frobenius_ratio
    return {
        "dataset": dataset, "k": int(k), "c": int(c), "theta": theta, "method": method,
        "spectral_ratio": spectral_ratio, "frobenius_ratio": frobenius_ratio,
        "spectral_ratio_mean": spectral_ratio_mean, "frobenius_ratio_mean": frobenius_ratio_mean,
        "certificate": certificate, "seed": seed, "repetitions": int(repetitions), "error": None,
    }


def _error_row(dataset, k, c, theta, method, exc):
    row = {f: None for f in ROW_FIELDS}
    row.update(dataset=dataset, k=int(k), c=None if c is None else int(c), theta=theta,
               method=method, repetitions=0, error=f"{type(exc).__name__}: {exc}")
    return row


def markers(rows, norm="both"):
    """Reference points per ``(dataset, k)``: ``c = k`` and, per method and
    norm, the smallest swept ``c`` whose ratio is at most 1."""
    out = []
    norms = ["spectral", "frobenius"] if norm == "both" else [norm]
    groups = {}
    for row in rows:
        groups.setdefault((row["dataset"], row["k"]), []).append(row)
    for (dataset, k), group in groups.items():
        out.append({"dataset": dataset, "k": k, "kind": "c_equals_k", "method": None,
                    "norm": None, "c": k})
        for method in dict.fromkeys(r["method"] for r in group):
            for nm in norms:
                hits = [r["c"] for r in group
                        if r["method"] == method and r["error"] is None
                        and r[f"{nm}_ratio"] is not None and r[f"{nm}_ratio"] <= 1.0]
                out.append({"dataset": dataset, "k": k, "kind": "ratio_le_1", "method": method,
                            "norm": nm, "c": min(hits) if hits else None})
    return out


def monotone_violations(rows, rtol=1e-9):
    """Deterministic-curve points where the ratio increases with ``c``."""
    bad = []
    groups = {}
    for row in rows:
        if row["method"] == DETERMINISTIC and row["error"] is None and row["c"] is not None:
            groups.setdefault((row["dataset"], row["k"]), []).append(row)
    for key, group in groups.items():
        group = sorted(group, key=lambda r: r["c"])
        for nm in ("spectral_ratio", "frobenius_ratio"):
            vals = [r[nm] for r in group if r[nm] is not None]
            for prev, cur in zip(vals, vals[1:]):
                if cur > prev * (1 + rtol) + 1e-12:
                    bad.append((key, nm, prev, cur))
    return bad


def run_experiment(config):
    """Run the grid; returns the report dictionary."""
    tasks = []
    for name, k, a in load_datasets(config):
        for method in config.methods:
            tasks.append((config, name, k, method, a))
    if config.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            chunks = list(pool.map(run_cells, tasks))
    else:
        chunks = [run_cells(t) for t in tasks]
    rows = [row for chunk in chunks for row in chunk]
    rows.sort(key=lambda r: (r["dataset"], r["k"], _sort_c(r), _METHOD_CODES[r["method"]]))
    for violation in monotone_violations(rows):
        log.warning("non-monotone deterministic curve: %s", violation)
    return {
        "version": REPORT_VERSION,
        "package_version": __version__,
        "config": _config_for_report(config),
        "rows": rows,
        "markers": markers(rows, config.norm),
    }


def _sort_c(row):
    return row["c"] if row["c"] is not None else math.inf


def _config_for_report(config):
    data = config.to_dict()
    # execution settings do not change results and are left out so reports
    # from serial and parallel runs compare byte for byte
    data.pop("jobs")
    data.pop("output_path")
    return data


def dumps_json(obj):
    return json.dumps(obj, indent=2, allow_nan=True) + "\n"


def write_report(report, path, fmt="json"):
    """Write ``report`` as JSON, or as CSV rows plus a ``.markers.csv`` sidecar."""
    path = Path(path)
    if fmt == "json":
        path.write_text(dumps_json(report), encoding="utf-8")
        return [path]
    rows_path = path
    markers_path = path.with_suffix(".markers.csv")
    _write_csv(rows_path, ROW_FIELDS, report["rows"])
    _write_csv(markers_path, MARKER_FIELDS, report["markers"])
    return [rows_path, markers_path]


def _csv_value(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _write_csv(path, fields, records):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(fields)
        for rec in records:
            writer.writerow([_csv_value(rec.get(f)) for f in fields])


__all__ = [
    "ExperimentConfig", "run_experiment", "write_report", "markers", "monotone_violations",
    "cell_seed", "ROW_FIELDS", "MARKER_FIELDS", "stopping_count",
]
