"""
Report Models
-------------

Results of identity checks and the versioned JSON report emitted by the
command-line driver.
"""

from datetime import datetime, timezone
from typing import Any, Dict, List, Optional

from jsonschema import validate

REPORT_SCHEMA_VERSION = 1

REPORT_SCHEMA = {
    "type": "object",
    "properties": {
        "schema_version": {"type": "integer", "const": REPORT_SCHEMA_VERSION},
        "command": {"type": "string"},
        "backend": {"type": "string"},
        "config": {"type": "object"},
        "passed": {"type": "boolean"},
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "name": {"type": "string"},
                    "group": {"type": "string"},
                    "status": {"enum": ["pass", "fail", "skipped", "discrepancy"]},
                    "identity": {"type": "string"},
                    "detail": {"type": "string"},
                    "samples": {"type": "integer", "minimum": 0},
                },
                "required": ["name", "status"],
            },
        },
        "results": {"type": "object"},
        "created_at": {"type": "string"},
    },
    "required": ["schema_version", "command", "checks", "passed"],
}


class CheckResult:
    VALID_STATUS = ["pass", "fail", "skipped", "discrepancy"]

    def __init__(
        self,
        name: str,
        status: str,
        identity: str = "",
        detail: str = "",
        samples: int = 0,
        group: str = "",
    ):
        if status not in self.VALID_STATUS:
            raise ValueError(f"Status must be one of: {', '.join(self.VALID_STATUS)}")
        self.name = name
        self.status = status
        self.identity = identity
        self.detail = detail
        self.samples = samples
        self.group = group

    @classmethod
    def from_flag(cls, name: str, ok: bool, **kwargs) -> 'CheckResult':
        return cls(name, "pass" if ok else "fail", **kwargs)

    @property
    def passed(self) -> bool:
        return self.status != "fail"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "group": self.group,
            "status": self.status,
            "identity": self.identity,
            "detail": self.detail,
            "samples": self.samples,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'CheckResult':
        return cls(
            name=data["name"],
            status=data["status"],
            identity=data.get("identity", ""),
            detail=data.get("detail", ""),
            samples=data.get("samples", 0),
            group=data.get("group", ""),
        )

    def __repr__(self) -> str:
        return f"CheckResult({self.name}: {self.status})"


class Report:
    def __init__(
        self,
        command: str,
        backend: str = "",
        config: Optional[Dict[str, Any]] = None,
        checks: Optional[List[CheckResult]] = None,
        results: Optional[Dict[str, Any]] = None,
        created_at: Optional[str] = None,
    ):
        self.command = command
        self.backend = backend
        self.config = config or {}
        self.checks = checks or []
        self.results = results or {}
        self.created_at = created_at or datetime.now(timezone.utc).isoformat()

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def discrepancies(self) -> List[CheckResult]:
        return [check for check in self.checks if check.status == "discrepancy"]

    def add(self, checks) -> None:
        if isinstance(checks, CheckResult):
            self.checks.append(checks)
        else:
            self.checks.extend(checks)

    def summary_lines(self) -> List[str]:
        lines = []
        for check in self.checks:
            label = f"[{check.group}] " if check.group else ""
            lines.append(f"{check.status.upper():7} {label}{check.name}: {check.identity}")
        return lines

    def to_dict(self, deterministic: bool = True) -> Dict[str, Any]:
        data = {
            "schema_version": REPORT_SCHEMA_VERSION,
            "command": self.command,
            "backend": self.backend,
            "config": self.config,
            "passed": self.passed,
            "checks": [check.to_dict() for check in self.checks],
            "results": self.results,
        }
        if not deterministic:
            data["created_at"] = self.created_at
        validate(instance=data, schema=REPORT_SCHEMA)
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'Report':
        validate(instance=data, schema=REPORT_SCHEMA)
        return cls(
            command=data["command"],
            backend=data.get("backend", ""),
            config=data.get("config", {}),
            checks=[CheckResult.from_dict(item) for item in data["checks"]],
            results=data.get("results", {}),
            created_at=data.get("created_at"),
        )
