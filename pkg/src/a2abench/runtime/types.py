"""Runtime-side value types: deployment verdicts and execution traces."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any


class HandleState(str, Enum):
    STARTING = "starting"
    HEALTHY = "healthy"
    FAILED = "failed"
    STOPPED = "stopped"


@dataclass(frozen=True)
class DeploymentVerdict:
    """Stage-1 success predicate: retrievable card that validates strictly."""

    card_retrievable: bool
    schema_valid: bool

    @property
    def success(self) -> bool:
        return self.card_retrievable and self.schema_valid

    def to_dict(self) -> dict[str, bool]:
        return {
            "card_retrievable": self.card_retrievable,
            "schema_valid": self.schema_valid,
            "success": self.success,
        }


@dataclass
class TraceStep:
    action: str
    tool_id: str | None
    output_excerpt: str

    def to_dict(self) -> dict[str, Any]:
        return {"action": self.action, "tool_id": self.tool_id, "output_excerpt": self.output_excerpt}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> TraceStep:
        return cls(
            action=str(data.get("action", "")),
            tool_id=data.get("tool_id"),
            output_excerpt=str(data.get("output_excerpt", "")),
        )


@dataclass
class ExecutionTrace:
    """Step log of one task execution, as streamed by the agent."""

    task_id: str
    repo_id: str
    steps: list[TraceStep] = field(default_factory=list)
    artifacts: list[str] = field(default_factory=list)
    final_response: str = ""
    wall_time: float = 0.0

    def to_dict(self) -> dict[str, Any]:
        return {
            "task_id": self.task_id,
            "repo_id": self.repo_id,
            "steps": [s.to_dict() for s in self.steps],
            "artifacts": list(self.artifacts),
            "final_response": self.final_response,
            "wall_time": self.wall_time,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ExecutionTrace:
        return cls(
            task_id=str(data.get("task_id", "")),
            repo_id=str(data.get("repo_id", "")),
            steps=[TraceStep.from_dict(s) for s in data.get("steps", [])],
            artifacts=[str(a) for a in data.get("artifacts", [])],
            final_response=str(data.get("final_response", "")),
            wall_time=float(data.get("wall_time", 0.0)),
        )
