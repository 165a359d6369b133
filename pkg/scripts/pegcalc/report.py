"""
Machine-readable reports.

JSON is the canonical form: keys sorted, two-space indent, records sorted
by check name then inputs digest. CSV is a flattening of the same records
with one row per check.
"""

import hashlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Union

import jsonschema
import numpy as np
import orjson
import pandas as pd

from .constants import CheckStatus
from .models import CheckResult
from .scenario import ScenarioSetup

DIGEST_LENGTH = 16
JSON_OPTIONS = orjson.OPT_SORT_KEYS | orjson.OPT_INDENT_2 | orjson.OPT_SERIALIZE_NUMPY

REPORT_SCHEMA: Dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["command", "version", "seed", "summary", "records"],
    "properties": {
        "command": {"type": "string"},
        "version": {"type": "string"},
        "seed": {"type": ["integer", "null"]},
        "summary": {
            "type": "object",
            "required": ["total", "pass", "fail", "diagnostic"],
            "properties": {key: {"type": "integer", "minimum": 0} for key in ("total", "pass", "fail", "diagnostic")},
        },
        "records": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "anchor", "status", "residuals", "tolerance", "details", "scenario", "seed", "digest"],
                "properties": {
                    "name": {"type": "string"},
                    "anchor": {"type": "string"},
                    "status": {"enum": [status.label for status in CheckStatus]},
                    "residuals": {"type": "object", "additionalProperties": {"type": ["number", "null"]}},
                    "tolerance": {"type": ["number", "null"]},
                    "details": {"type": "object"},
                    "scenario": {"type": "string"},
                    "seed": {"type": ["integer", "null"]},
                    "digest": {"type": "string", "pattern": f"^[0-9a-f]{{{DIGEST_LENGTH}}}$"},
                    "wall_time": {"type": "number", "minimum": 0},
                },
            },
        },
    },
}


def scenario_digest(setup: ScenarioSetup) -> str:
    """sha256 prefix over the numerical inputs of a scenario."""
    s = setup.scenario
    sha = hashlib.sha256()
    sha.update(orjson.dumps({"dims": s.dims.to_list(), "times": list(s.times), "K_S": setup.K_S}))
    for m in [s.rho, *s.dynamics.unitaries, *(p for h in s.histories for p in h.projectors)]:
        sha.update(np.ascontiguousarray(m, dtype=np.complex128).tobytes())
    return sha.hexdigest()[:DIGEST_LENGTH]


@dataclass
class CheckRecord:
    """
    A check result placed in its scenario.

    Attributes:
        scenario: scenario name
        result: the check outcome
        seed: seed of the scenario's sampled checks
        digest: digest of the scenario inputs
        wall_time: seconds spent, recorded only when timings are requested
    """
    scenario: str
    result: CheckResult
    seed: Optional[int]
    digest: str
    wall_time: Optional[float] = None

    @property
    def sort_key(self):
        return (self.result.name, self.digest, self.scenario)

    def to_dict(self) -> Dict[str, Any]:
        data = self.result.to_dict()
        data.update(scenario=self.scenario, seed=self.seed, digest=self.digest)
        if self.wall_time is not None:
            data["wall_time"] = self.wall_time
        return data


@dataclass
class Report:
    """
    Outcome of one CLI command.

    Attributes:
        command: subcommand that produced the report
        version: package version
        seed: run seed, if any
        records: check records in any order
    """
    command: str
    version: str
    seed: Optional[int] = None
    records: List[CheckRecord] = field(default_factory=list)

    def extend(self, records: Iterable[CheckRecord]) -> None:
        self.records.extend(records)

    @property
    def sorted_records(self) -> List[CheckRecord]:
        return sorted(self.records, key=lambda r: r.sort_key)

    @property
    def failures(self) -> List[CheckRecord]:
        return [r for r in self.sorted_records if r.result.status is CheckStatus.FAIL]

    @property
    def exit_code(self) -> int:
        """0 iff no asserted check failed."""
        return 1 if self.failures else 0

    def summary(self) -> Dict[str, int]:
        counts = {status.label: 0 for status in CheckStatus}
        for record in self.records:
            counts[record.result.status.label] += 1
        counts["total"] = len(self.records)
        return counts

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for JSON serialization."""
        return {
            "command": self.command,
            "version": self.version,
            "seed": self.seed,
            "summary": self.summary(),
            "records": [r.to_dict() for r in self.sorted_records],
        }

    def to_json(self) -> bytes:
        """
        Canonical JSON bytes, validated against REPORT_SCHEMA.

        Raises:
            jsonschema.ValidationError: the report violates its schema
        """
        payload = orjson.dumps(self.to_dict(), option=JSON_OPTIONS)
        jsonschema.validate(orjson.loads(payload), REPORT_SCHEMA)
        return payload + b"\n"

    def to_frame(self) -> pd.DataFrame:
        """One row per record; residuals flattened to ``residuals.<name>`` columns."""
        rows = []
        for record in self.sorted_records:
            data = record.to_dict()
            data.pop("details")
            data["max_residual"] = record.result.max_residual
            rows.append(data)
        frame = pd.json_normalize(rows)
        lead = ["scenario", "name", "anchor", "status", "tolerance", "max_residual", "seed", "digest"]
        lead = [c for c in lead if c in frame.columns]
        rest = sorted(c for c in frame.columns if c not in lead)
        return frame[lead + rest]

    def to_csv(self) -> bytes:
        return self.to_frame().to_csv(index=False, lineterminator="\n").encode("utf-8")

    def render(self, fmt: str = "json") -> bytes:
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        raise ValueError(f"unknown report format {fmt!r}")

    def write(self, path: Union[str, Path], fmt: str = "json") -> None:
        Path(path).write_bytes(self.render(fmt))
