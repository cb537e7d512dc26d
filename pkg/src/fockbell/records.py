"""RunRecord: the JSON envelope written by the command-line tool."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from importlib import resources

from . import __version__

EPOCH = "1970-01-01T00:00:00Z"


@dataclass(frozen=True)
class RunRecord:
    command: str
    parameters: dict
    outputs: dict
    version: str = __version__
    timestamp: str = EPOCH

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True, allow_nan=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RunRecord":
        return cls(**json.loads(text))


def now_timestamp() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def load_schema() -> dict:
    return json.loads(resources.files("fockbell").joinpath("runrecord.schema.json").read_text())


def table_payload(columns, rows) -> dict:
    return {"columns": list(columns), "rows": [list(r) for r in rows]}
