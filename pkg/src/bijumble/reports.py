"""Audit records, run configuration, and persistent reports.

Every lemma audit produces one AuditReport tying the measured quantity and
the bound to the full hypothesis evidence.  In strict mode a report may say
pass or fail only when every hypothesis record is both satisfied and
certified (exact enumeration or a sound spectral bound); anything less is
reported as hypotheses-not-met.  Relaxed mode records the same evidence but
verdicts against user-supplied slack.

Reports serialise to one JSON document each (fixed key order, UTF-8) plus a
run-level index.csv row; re-serialising a parsed report is byte-identical
except for the wall-clock field.
"""

from __future__ import annotations

import csv
import json
import os
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from ._numeric import ABS_TOL, REL_TOL
from .errors import ParameterError

ENV_OUT_DIR = "BIJUMBLE_OUT_DIR"

REPORT_KEY_ORDER = (
    "lemma",
    "mode",
    "verdict",
    "measured",
    "bound",
    "bound_kind",
    "margin",
    "parameters",
    "hypotheses",
    "seed",
    "tolerance_rel",
    "tolerance_abs",
    "toolkit_version",
    "wall_clock_s",
)


@dataclass(frozen=True)
class HypothesisRecord:
    """One checked precondition: its numeric outcome and evidence quality."""

    name: str
    satisfied: bool
    certified: bool
    detail: dict = field(default_factory=dict)

    def passes_strict(self) -> bool:
        return self.satisfied and self.certified

    def to_record(self) -> dict:
        return {
            "name": self.name,
            "satisfied": self.satisfied,
            "certified": self.certified,
            "detail": _jsonable(self.detail),
        }


@dataclass(frozen=True)
class AuditReport:
    lemma: str
    mode: str  # "strict" | "relaxed"
    verdict: str  # "pass" | "fail" | "hypotheses-not-met"
    measured: float | int | None
    bound: float | list | None
    bound_kind: str  # "upper" | "lower" | "window" | "none"
    hypotheses: tuple[HypothesisRecord, ...]
    parameters: dict
    seed: int
    margin: float | None = None
    wall_clock_s: float = 0.0
    toolkit_version: str = __version__
    tolerance_rel: float = REL_TOL
    tolerance_abs: float = ABS_TOL

    def to_record(self) -> dict:
        return {
            "lemma": self.lemma,
            "mode": self.mode,
            "verdict": self.verdict,
            "measured": self.measured,
            "bound": self.bound,
            "bound_kind": self.bound_kind,
            "margin": self.margin,
            "parameters": _jsonable(self.parameters),
            "hypotheses": [h.to_record() for h in self.hypotheses],
            "seed": self.seed,
            "tolerance_rel": self.tolerance_rel,
            "tolerance_abs": self.tolerance_abs,
            "toolkit_version": self.toolkit_version,
            "wall_clock_s": self.wall_clock_s,
        }


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if hasattr(value, "to_record"):
        return _jsonable(value.to_record())
    if isinstance(value, (bool, int, float, str)) or value is None:
        return value
    if hasattr(value, "mills"):  # MilliValue
        return str(value)
    return str(value)


def verdict_for(mode: str, hypotheses, comparison_ok: bool) -> str:
    """Apply the strict/relaxed verdict rule.

    Strict mode never says pass or fail on uncertified or unsatisfied
    hypotheses; relaxed mode verdicts the comparison and leaves the evidence
    on record.
    """
    if mode not in ("strict", "relaxed"):
        raise ParameterError(f"unknown mode {mode!r}")
    if mode == "strict" and not all(h.passes_strict() for h in hypotheses):
        return "hypotheses-not-met"
    return "pass" if comparison_ok else "fail"


def make_report(
    lemma: str,
    mode: str,
    hypotheses,
    comparison_ok: bool,
    measured,
    bound,
    bound_kind: str,
    parameters: dict,
    seed: int,
    margin: float | None = None,
    started: float | None = None,
) -> AuditReport:
    wall = time.perf_counter() - started if started is not None else 0.0
    return AuditReport(
        lemma=lemma,
        mode=mode,
        verdict=verdict_for(mode, hypotheses, comparison_ok),
        measured=measured,
        bound=bound,
        bound_kind=bound_kind,
        hypotheses=tuple(hypotheses),
        parameters=parameters,
        seed=seed,
        margin=margin,
        wall_clock_s=wall,
    )


def serialize_report(report: AuditReport) -> str:
    rec = report.to_record()
    ordered = {key: rec[key] for key in REPORT_KEY_ORDER}
    return json.dumps(ordered, indent=2, ensure_ascii=False) + "\n"


def parse_report(text: str) -> dict:
    return json.loads(text)


def write_report(report: AuditReport, out_dir) -> Path:
    """Write one JSON document and append the run-level index.csv row.

    Filename: <lemma>-<seed>-<counter>.json with counter = number of reports
    already present, so a rerun of an identical plan reproduces everything
    but the counter and wall-clock.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    counter = sum(1 for _ in out.glob("*.json"))
    path = out / f"{report.lemma}-{report.seed}-{counter:04d}.json"
    path.write_text(serialize_report(report), encoding="utf-8")
    index = out / "index.csv"
    new = not index.exists()
    with index.open("a", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        if new:
            writer.writerow(["lemma", "mode", "verdict", "measured", "bound", "seed"])
        writer.writerow(
            [report.lemma, report.mode, report.verdict, report.measured, report.bound, report.seed]
        )
    return path


@dataclass
class RunConfig:
    """Global toolkit configuration; the seed is mandatory.

    Only the output directory may come from the environment
    (BIJUMBLE_OUT_DIR); every other parameter flows through flags or the
    flat ``key = value`` config file.
    """

    seed: int
    float_rel_tol: float = REL_TOL
    float_abs_tol: float = ABS_TOL
    spectral_tol: float = 1e-9
    spectral_max_iter: int = 10000
    workers: int = 1
    exact_enum_cap: int = 1 << 22
    optialpha_cap: int = 10**8
    out_dir: str = "reports"

    def __post_init__(self):
        if self.float_rel_tol <= 0 or self.float_abs_tol <= 0 or self.spectral_tol <= 0:
            raise ParameterError("tolerances must be positive")
        if self.workers < 1:
            raise ParameterError("workers must be >= 1")
        env_dir = os.environ.get(ENV_OUT_DIR)
        if env_dir:
            self.out_dir = env_dir

    _FIELD_TYPES = {
        "seed": int,
        "float_rel_tol": float,
        "float_abs_tol": float,
        "spectral_tol": float,
        "spectral_max_iter": int,
        "workers": int,
        "exact_enum_cap": int,
        "optialpha_cap": int,
        "out_dir": str,
    }

    @classmethod
    def from_text(cls, text: str, **overrides) -> "RunConfig":
        values: dict = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ParameterError(f"config line {lineno}: expected 'key = value'")
            key, _, val = line.partition("=")
            key, val = key.strip(), val.strip()
            if key not in cls._FIELD_TYPES:
                raise ParameterError(f"config line {lineno}: unknown key {key!r}")
            values[key] = cls._FIELD_TYPES[key](val)
        values.update(overrides)
        if "seed" not in values:
            raise ParameterError("config must provide a seed")
        return cls(**values)
