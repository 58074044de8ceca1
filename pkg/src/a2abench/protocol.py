"""A2A protocol surface: agent cards, skills, task messages, validation.

Wire encoding is UTF-8 JSON. Cards are served at GET ``/.well-known/agent.json``
and tasks are POSTed to ``/tasks/send``; both routes are conventions of this
harness (the protocol itself only requires *an* endpoint) and are exported as
constants so nothing else hard-codes them.

All types here are treated as immutable after construction; parsing,
serialization and validation are pure functions safe to call concurrently.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

CARD_ROUTE = "/.well-known/agent.json"
TASK_SEND_ROUTE = "/tasks/send"

_CARD_KEYS = (
    "name",
    "description",
    "version",
    "url",
    "capabilities",
    "defaultInputModes",
    "defaultOutputModes",
    "skills",
)
_SKILL_KEYS = (
    "id",
    "name",
    "description",
    "tags",
    "examples",
    "inputModes",
    "outputModes",
)


class CardDecodeError(ValueError):
    """Raised when card bytes are malformed or a known field has a wrong type."""

    def __init__(self, message: str, path: str | None = None):
        super().__init__(message if path is None else f"{path}: {message}")
        self.path = path


class InvalidPartError(ValueError):
    """Raised when a message part violates the part invariants."""

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message if index is None else f"parts[{index}]: {message}")
        self.index = index


@dataclass
class AgentSkill:
    """A single advertised capability on an agent card."""

    id: str
    name: str
    description: str
    tags: list[str] = field(default_factory=list)
    examples: list[str] = field(default_factory=list)
    input_modes: list[str] = field(default_factory=list)
    output_modes: list[str] = field(default_factory=list)
    extra: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {
            "id": self.id,
            "name": self.name,
            "description": self.description,
            "tags": list(self.tags),
            "examples": list(self.examples),
            "inputModes": list(self.input_modes),
            "outputModes": list(self.output_modes),
        }
        for key in sorted(self.extra):
            d[key] = self.extra[key]
        return d


@dataclass
class AgentCard:
    """An agent's self-description registry: identity, capabilities, skills.

    Unknown wire fields are preserved opaquely in ``extra`` so that real-world
    cards survive a parse/serialize round trip.
    """

    name: str
    description: str
    version: str
    url: str = ""
    capabilities: dict[str, bool] = field(default_factory=dict)
    default_input_modes: list[str] = field(default_factory=list)
    default_output_modes: list[str] = field(default_factory=list)
    skills: list[AgentSkill] = field(default_factory=list)
    extra: dict[str, Any] = field(default_factory=dict)

    def capability(self, name: str, default: bool = False) -> bool:
        return self.capabilities.get(name, default)

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {
            "name": self.name,
            "description": self.description,
            "version": self.version,
            "url": self.url,
            "capabilities": {k: self.capabilities[k] for k in sorted(self.capabilities)},
            "defaultInputModes": list(self.default_input_modes),
            "defaultOutputModes": list(self.default_output_modes),
            "skills": [s.to_dict() for s in self.skills],
        }
        for key in sorted(self.extra):
            d[key] = self.extra[key]
        return d


class PartKind(str, Enum):
    TEXT = "text"
    FILE = "file"


@dataclass(frozen=True)
class MessagePart:
    """One part of a task message: either text or a sandbox file reference."""

    kind: PartKind
    text: str | None = None
    file_path: str | None = None
    mime_type: str | None = None

    def __post_init__(self) -> None:
        if self.kind is PartKind.TEXT:
            if self.text is None or self.file_path is not None or self.mime_type is not None:
                raise InvalidPartError("text part must carry text and no file fields")
        elif self.kind is PartKind.FILE:
            if self.file_path is None or self.mime_type is None or self.text is not None:
                raise InvalidPartError("file part must carry file_path and mime_type only")
        else:  # pragma: no cover - enum is closed
            raise InvalidPartError(f"unknown part kind {self.kind!r}")

    @classmethod
    def from_text(cls, text: str) -> MessagePart:
        return cls(kind=PartKind.TEXT, text=text)

    @classmethod
    def from_file(cls, path: str, mime_type: str) -> MessagePart:
        return cls(kind=PartKind.FILE, file_path=path, mime_type=mime_type)

    def to_dict(self) -> dict[str, Any]:
        if self.kind is PartKind.TEXT:
            return {"kind": "text", "text": self.text}
        return {"kind": "file", "file": {"path": self.file_path, "mime_type": self.mime_type}}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> MessagePart:
        kind = data.get("kind")
        if kind == "text":
            text = data.get("text")
            if not isinstance(text, str):
                raise InvalidPartError("text part requires a string 'text' field")
            return cls.from_text(text)
        if kind == "file":
            file_obj = data.get("file")
            if not isinstance(file_obj, dict):
                raise InvalidPartError("file part requires a 'file' object")
            path = file_obj.get("path")
            mime = file_obj.get("mime_type")
            if not isinstance(path, str) or not isinstance(mime, str):
                raise InvalidPartError("file part requires string 'path' and 'mime_type'")
            return cls.from_file(path, mime)
        raise InvalidPartError(f"unknown part kind {kind!r}")


class TaskStatus(str, Enum):
    COMPLETED = "completed"
    FAILED = "failed"
    REJECTED = "rejected"


@dataclass(frozen=True)
class TaskRequest:
    task_id: str
    parts: tuple[MessagePart, ...]

    def to_dict(self) -> dict[str, Any]:
        return {"task_id": self.task_id, "parts": [p.to_dict() for p in self.parts]}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> TaskRequest:
        task_id = data.get("task_id")
        if not isinstance(task_id, str) or not task_id:
            raise InvalidPartError("task_id must be a non-empty string")
        raw_parts = data.get("parts")
        if not isinstance(raw_parts, list) or not raw_parts:
            raise InvalidPartError("parts must be a non-empty list")
        return cls(task_id=task_id, parts=tuple(MessagePart.from_dict(p) for p in raw_parts))


@dataclass(frozen=True)
class TaskResult:
    task_id: str
    status: TaskStatus
    parts: tuple[MessagePart, ...] = ()
    transcript: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {
            "task_id": self.task_id,
            "status": self.status.value,
            "parts": [p.to_dict() for p in self.parts],
            "transcript": self.transcript,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> TaskResult:
        return cls(
            task_id=str(data.get("task_id", "")),
            status=TaskStatus(data.get("status", "failed")),
            parts=tuple(MessagePart.from_dict(p) for p in data.get("parts", [])),
            transcript=str(data.get("transcript", "")),
        )


@dataclass(frozen=True)
class ValidationFailure:
    path: str
    rule: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    failures: tuple[ValidationFailure, ...] = ()

    def rule_ids(self) -> set[str]:
        return {f.rule for f in self.failures}

    def failure_paths(self) -> set[str]:
        return {f.path for f in self.failures}


def _expect_str(data: dict[str, Any], key: str, path: str) -> str:
    value = data.get(key, "")
    if not isinstance(value, str):
        raise CardDecodeError(f"expected string, got {type(value).__name__}", path)
    return value


def _expect_str_list(data: dict[str, Any], key: str, path: str) -> list[str]:
    value = data.get(key, [])
    if not isinstance(value, list) or any(not isinstance(v, str) for v in value):
        raise CardDecodeError("expected list of strings", path)
    return list(value)


def _parse_skill(data: Any, path: str) -> AgentSkill:
    if not isinstance(data, dict):
        raise CardDecodeError("expected skill object", path)
    extra = {k: v for k, v in data.items() if k not in _SKILL_KEYS}
    return AgentSkill(
        id=_expect_str(data, "id", f"{path}.id"),
        name=_expect_str(data, "name", f"{path}.name"),
        description=_expect_str(data, "description", f"{path}.description"),
        tags=_expect_str_list(data, "tags", f"{path}.tags"),
        examples=_expect_str_list(data, "examples", f"{path}.examples"),
        input_modes=_expect_str_list(data, "inputModes", f"{path}.inputModes"),
        output_modes=_expect_str_list(data, "outputModes", f"{path}.outputModes"),
        extra=extra,
    )


def parse_agent_card(raw: bytes | str) -> AgentCard:
    """Decode an agent card from its JSON wire form.

    ``tools`` is accepted as an alias for ``skills`` (some producers use it);
    a missing skills list parses as empty. Unknown fields are kept verbatim.
    """
    if isinstance(raw, bytes):
        try:
            raw = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise CardDecodeError(f"not valid UTF-8: {exc}") from exc
    if not raw.strip():
        raise CardDecodeError("empty input")
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise CardDecodeError(f"malformed JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise CardDecodeError("top-level value must be an object")

    raw_skills = data.get("skills")
    consumed_alias = False
    if raw_skills is None and "tools" in data:
        raw_skills = data["tools"]
        consumed_alias = True
    if raw_skills is None:
        raw_skills = []
    if not isinstance(raw_skills, list):
        raise CardDecodeError("expected list", "skills")
    skills = [_parse_skill(s, f"skills[{i}]") for i, s in enumerate(raw_skills)]

    raw_caps = data.get("capabilities", {})
    if not isinstance(raw_caps, dict):
        raise CardDecodeError("expected object", "capabilities")
    for key, value in raw_caps.items():
        if not isinstance(value, bool):
            raise CardDecodeError("expected boolean", f"capabilities.{key}")

    known = set(_CARD_KEYS) | ({"tools"} if consumed_alias else set())
    extra = {k: v for k, v in data.items() if k not in known}
    return AgentCard(
        name=_expect_str(data, "name", "name"),
        description=_expect_str(data, "description", "description"),
        version=_expect_str(data, "version", "version"),
        url=_expect_str(data, "url", "url"),
        capabilities=dict(raw_caps),
        default_input_modes=_expect_str_list(data, "defaultInputModes", "defaultInputModes"),
        default_output_modes=_expect_str_list(data, "defaultOutputModes", "defaultOutputModes"),
        skills=skills,
        extra=extra,
    )


def serialize_agent_card(card: AgentCard) -> bytes:
    """Canonical wire form: fixed field order, sorted extras, stable bytes."""
    text = json.dumps(card.to_dict(), indent=2, ensure_ascii=False)
    return (text + "\n").encode("utf-8")


def validate_agent_card(card: AgentCard, mode: str = "strict") -> ValidationReport:
    """Check a parsed card and enumerate every failure.

    Strict mode enforces the full card contract: non-empty identity fields and
    a non-empty skills list whose every entry has id, name and description.
    Lenient mode only requires name/version/url to be present.
    """
    failures: list[ValidationFailure] = []

    def fail(path: str, rule: str, message: str) -> None:
        failures.append(ValidationFailure(path=path, rule=rule, message=message))

    if mode == "lenient":
        if not card.name:
            fail("name", "name.present", "card name is missing")
        if not card.version:
            fail("version", "version.present", "card version is missing")
        if not card.url:
            fail("url", "url.present", "card url is missing")
    elif mode == "strict":
        if not card.name:
            fail("name", "name.non_empty", "card name must be non-empty")
        if not card.description:
            fail("description", "description.non_empty", "card description must be non-empty")
        if not card.version:
            fail("version", "version.non_empty", "card version must be non-empty")
        if not card.skills:
            fail("skills", "skills.non_empty", "card must advertise at least one skill")
        for i, skill in enumerate(card.skills):
            if not skill.id:
                fail(f"skills[{i}].id", "skill.id.non_empty", "skill id must be non-empty")
            if not skill.name:
                fail(f"skills[{i}].name", "skill.name.non_empty", "skill name must be non-empty")
            if not skill.description:
                fail(
                    f"skills[{i}].description",
                    "skill.description.non_empty",
                    "skill description must be non-empty",
                )
    else:
        raise ValueError(f"unknown validation mode {mode!r}")

    return ValidationReport(valid=not failures, failures=tuple(failures))


def build_task_message(task_id: str, parts: list[MessagePart] | tuple[MessagePart, ...]) -> TaskRequest:
    """Assemble a task request, rejecting empty or malformed part lists."""
    if not task_id:
        raise InvalidPartError("task_id must be non-empty")
    if not parts:
        raise InvalidPartError("parts must be non-empty")
    for i, part in enumerate(parts):
        if not isinstance(part, MessagePart):
            raise InvalidPartError(f"expected MessagePart, got {type(part).__name__}", index=i)
    return TaskRequest(task_id=task_id, parts=tuple(parts))
