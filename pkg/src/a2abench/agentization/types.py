"""Value types produced by the agentization pipeline."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from ..protocol import AgentCard, parse_agent_card, serialize_agent_card


class FailureClass(str, Enum):
    STARTUP_FAILURE = "startup_failure"
    SCHEMA_NONCOMPLIANCE = "schema_noncompliance"
    UNUSABLE_SKILLS = "unusable_skills"
    BACKEND_ERROR = "backend_error"


@dataclass
class EnvironmentSpec:
    """Synthesized execution environment for one repository sandbox.

    ``verified`` is set only after the probe run exits successfully; the
    sandbox root travels in ``env_vars["REPO_ROOT"]``.
    """

    env_vars: dict[str, str] = field(default_factory=dict)
    setup_commands: list[str] = field(default_factory=list)
    interpreter_path: str = ""
    verified: bool = False

    def to_dict(self) -> dict[str, Any]:
        return {
            "env_vars": dict(sorted(self.env_vars.items())),
            "setup_commands": list(self.setup_commands),
            "interpreter_path": self.interpreter_path,
            "verified": self.verified,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> EnvironmentSpec:
        return cls(
            env_vars=dict(data.get("env_vars", {})),
            setup_commands=list(data.get("setup_commands", [])),
            interpreter_path=str(data.get("interpreter_path", "")),
            verified=bool(data.get("verified", False)),
        )


@dataclass
class ExtractedTool:
    """A wrapped functional unit with a typed invocation template.

    ``entry_command`` may use ``{python}``, ``{repo}``, ``{out}`` and one
    placeholder per ``input_schema`` parameter; ``validated`` flips to True
    only after one successful sample invocation in the synthesized
    environment.
    """

    tool_id: str
    name: str
    description: str
    entry_command: str
    input_schema: dict[str, str] = field(default_factory=dict)
    validated: bool = False
    sample_args: dict[str, str] = field(default_factory=dict)
    output_ext: str = ""
    tags: list[str] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {
            "tool_id": self.tool_id,
            "name": self.name,
            "description": self.description,
            "entry_command": self.entry_command,
            "input_schema": dict(self.input_schema),
            "validated": self.validated,
            "sample_args": dict(self.sample_args),
            "output_ext": self.output_ext,
            "tags": list(self.tags),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ExtractedTool:
        return cls(
            tool_id=str(data["tool_id"]),
            name=str(data.get("name", data["tool_id"])),
            description=str(data.get("description", "")),
            entry_command=str(data.get("entry_command", "")),
            input_schema={str(k): str(v) for k, v in data.get("input_schema", {}).items()},
            validated=bool(data.get("validated", False)),
            sample_args={str(k): str(v) for k, v in data.get("sample_args", {}).items()},
            output_ext=str(data.get("output_ext", "")),
            tags=[str(t) for t in data.get("tags", [])],
        )


@dataclass
class InnerAgentConfig:
    """Reasoning-loop configuration binding validated tools to a system prompt."""

    system_prompt: str
    tool_ids: list[str]
    reasoning_loop: str = "react"
    max_turns: int = 8

    def to_dict(self) -> dict[str, Any]:
        return {
            "system_prompt": self.system_prompt,
            "tool_ids": list(self.tool_ids),
            "reasoning_loop": self.reasoning_loop,
            "max_turns": self.max_turns,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> InnerAgentConfig:
        return cls(
            system_prompt=str(data.get("system_prompt", "")),
            tool_ids=[str(t) for t in data.get("tool_ids", [])],
            reasoning_loop=str(data.get("reasoning_loop", "react")),
            max_turns=int(data.get("max_turns", 8)),
        )


@dataclass
class AgentBundle:
    """Deployable product of a successful agentization attempt."""

    repo_id: str
    environment: EnvironmentSpec
    tools: list[ExtractedTool]
    inner: InnerAgentConfig
    card: AgentCard

    def repo_root(self) -> str:
        return self.environment.env_vars.get("REPO_ROOT", "")

    def to_dict(self) -> dict[str, Any]:
        return {
            "repo_id": self.repo_id,
            "environment": self.environment.to_dict(),
            "tools": [t.to_dict() for t in self.tools],
            "inner": self.inner.to_dict(),
            "card": self.card.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> AgentBundle:
        import json

        return cls(
            repo_id=str(data["repo_id"]),
            environment=EnvironmentSpec.from_dict(data.get("environment", {})),
            tools=[ExtractedTool.from_dict(t) for t in data.get("tools", [])],
            inner=InnerAgentConfig.from_dict(data.get("inner", {})),
            card=parse_agent_card(json.dumps(data.get("card", {}))),
        )

    def card_bytes(self) -> bytes:
        return serialize_agent_card(self.card)


@dataclass
class AttemptRecord:
    try_index: int
    success: bool
    tokens: int
    failure_class: FailureClass | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "try_index": self.try_index,
            "success": self.success,
            "tokens": self.tokens,
            "failure_class": self.failure_class.value if self.failure_class else None,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> AttemptRecord:
        raw = data.get("failure_class")
        return cls(
            try_index=int(data["try_index"]),
            success=bool(data["success"]),
            tokens=int(data.get("tokens", 0)),
            failure_class=FailureClass(raw) if raw else None,
        )


@dataclass
class AgentizationRecord:
    """Per-repository pipeline outcome: ordered attempts plus the bundle, if any."""

    repo_id: str
    attempts: list[AttemptRecord] = field(default_factory=list)
    bundle: AgentBundle | None = None

    def total_tokens(self) -> int:
        return sum(a.tokens for a in self.attempts)

    def succeeded(self) -> bool:
        return any(a.success for a in self.attempts)

    def first_success_try(self) -> int | None:
        for attempt in self.attempts:
            if attempt.success:
                return attempt.try_index
        return None

    def tries(self) -> int:
        """Index of the first success, or the number of attempts if none succeeded."""
        first = self.first_success_try()
        return first if first is not None else len(self.attempts)

    def validate(self) -> None:
        """Assert the record invariants; raises ValueError on violation."""
        for i, attempt in enumerate(self.attempts):
            if attempt.try_index != i + 1:
                raise ValueError(f"try_index must be consecutive from 1, got {attempt.try_index}")
            if not attempt.success and attempt.failure_class is None:
                raise ValueError(f"attempt {attempt.try_index} failed without a failure class")
            if attempt.success:
                if attempt.failure_class is not None:
                    raise ValueError("successful attempt cannot carry a failure class")
                if i != len(self.attempts) - 1:
                    raise ValueError("no attempts may follow a success")
                if self.bundle is None:
                    raise ValueError("successful record must carry a bundle")
            if attempt.tokens < 0:
                raise ValueError("token counts must be non-negative")

    def to_dict(self) -> dict[str, Any]:
        return {
            "repo_id": self.repo_id,
            "attempts": [a.to_dict() for a in self.attempts],
            "bundle": self.bundle.to_dict() if self.bundle else None,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> AgentizationRecord:
        raw_bundle = data.get("bundle")
        return cls(
            repo_id=str(data["repo_id"]),
            attempts=[AttemptRecord.from_dict(a) for a in data.get("attempts", [])],
            bundle=AgentBundle.from_dict(raw_bundle) if raw_bundle else None,
        )
