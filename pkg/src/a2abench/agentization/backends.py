"""Code-agent backend adapters driving the agentization phases.

A backend receives a phase prompt plus a sandbox handle and returns what it
did: commands run, files written, emitted tool or card definitions, and the
tokens it spent. Two implementations ship: a deterministic scripted backend
that replays recorded action lists, and a remote adapter that forwards the
prompt to a configured HTTP endpoint.
"""

from __future__ import annotations

import json
import threading
import urllib.request
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Protocol

from .sandbox import CommandResult, Sandbox

PHASES = ("environment", "tools", "inner", "card")

ACTION_TYPES = ("write_file", "run_command", "emit_card", "emit_skills")


class BackendError(RuntimeError):
    """The backend failed outside the normal pipeline failure taxonomy."""


@dataclass
class ExecutedCommand:
    result: CommandResult
    allow_failure: bool = False


@dataclass
class PhaseOutcome:
    """Everything a backend did during one phase."""

    phase: str
    tokens: int = 0
    commands: list[ExecutedCommand] = field(default_factory=list)
    files_written: list[str] = field(default_factory=list)
    tools: list[dict[str, Any]] | None = None
    card: dict[str, Any] | None = None


class CodeAgentBackend(Protocol):
    name: str

    def reset(self, repo_id: str) -> None:
        """Forget any per-repo session state (start of a fresh pipeline run)."""

    def run_phase(self, repo_id: str, phase: str, prompt: str, sandbox: Sandbox) -> PhaseOutcome:
        ...


def load_phase_prompt(phase: str, cwd: str, agentify_md_path: str, target_port: int) -> str:
    """Render the embedded per-phase prompt template."""
    if phase not in PHASES:
        raise ValueError(f"unknown phase {phase!r}")
    template = (
        resources.files("a2abench.agentization")
        .joinpath(f"prompts/phase_{phase}.txt")
        .read_text(encoding="utf-8")
    )
    return template.format(cwd=cwd, agentify_md_path=agentify_md_path, target_port=target_port)


def load_driver_prompt(backend_name: str, cwd: str, agentify_md_path: str, target_port: int) -> str:
    """Render the embedded driver template for a named backend profile."""
    template = (
        resources.files("a2abench.agentization")
        .joinpath(f"prompts/driver_{backend_name}.txt")
        .read_text(encoding="utf-8")
    )
    return template.format(cwd=cwd, agentify_md_path=agentify_md_path, target_port=target_port)


def _apply_actions(actions: list[dict[str, Any]], sandbox: Sandbox, outcome: PhaseOutcome) -> None:
    for action in actions:
        kind = action.get("type")
        payload = action.get("payload", {})
        if kind == "write_file":
            sandbox.write_file(payload["path"], payload.get("content", ""))
            outcome.files_written.append(payload["path"])
        elif kind == "run_command":
            command = sandbox.render(payload["command"])
            result = sandbox.run(command)
            outcome.commands.append(
                ExecutedCommand(result=result, allow_failure=bool(payload.get("allow_failure", False)))
            )
        elif kind == "emit_skills":
            outcome.tools = list(payload.get("tools", []))
        elif kind == "emit_card":
            outcome.card = dict(payload.get("card", {}))
        else:
            raise BackendError(f"unknown scripted action type {kind!r}")


class ScriptedBackend:
    """Deterministic replay of per-repo phase scripts.

    A script file ``<dir>/<repo_id>.json`` is a JSON list of
    ``{phase, actions, tokens}`` entries consumed strictly in order; the
    requested phase must match the next entry. Safe for concurrent pipelines
    over distinct repos.
    """

    name = "scripted"

    def __init__(self, script_dir: Path | str):
        self.script_dir = Path(script_dir)
        self._cursors: dict[str, int] = {}
        self._scripts: dict[str, list[dict[str, Any]]] = {}
        self._lock = threading.Lock()

    def _script_for(self, repo_id: str) -> list[dict[str, Any]]:
        if repo_id not in self._scripts:
            path = self.script_dir / f"{repo_id}.json"
            try:
                entries = json.loads(path.read_text(encoding="utf-8"))
            except (OSError, json.JSONDecodeError) as exc:
                raise BackendError(f"cannot load script for '{repo_id}': {exc}") from exc
            if not isinstance(entries, list):
                raise BackendError(f"script for '{repo_id}' must be a JSON list")
            self._scripts[repo_id] = entries
        return self._scripts[repo_id]

    def reset(self, repo_id: str) -> None:
        with self._lock:
            self._cursors[repo_id] = 0

    def run_phase(self, repo_id: str, phase: str, prompt: str, sandbox: Sandbox) -> PhaseOutcome:
        with self._lock:
            script = self._script_for(repo_id)
            cursor = self._cursors.get(repo_id, 0)
            if cursor >= len(script):
                raise BackendError(f"script for '{repo_id}' exhausted at phase '{phase}'")
            entry = script[cursor]
            self._cursors[repo_id] = cursor + 1
        if entry.get("phase") != phase:
            raise BackendError(
                f"script for '{repo_id}' expected phase '{entry.get('phase')}', pipeline asked for '{phase}'"
            )
        outcome = PhaseOutcome(phase=phase, tokens=int(entry.get("tokens", 0)))
        _apply_actions(list(entry.get("actions", [])), sandbox, outcome)
        return outcome


@dataclass
class LLMProfile:
    """Connection settings for a remote code-agent service."""

    backend_name: str
    endpoint: str
    model: str = ""
    api_key: str = ""
    timeout: float = 120.0


class LLMBackend:
    """Remote adapter: posts the phase prompt, applies the returned actions.

    The service must answer ``{"actions": [...], "tokens": n}`` using the
    scripted action vocabulary. Network-reliant and configuration-gated; a
    custom ``transport`` callable can stand in for HTTP in tests.
    """

    def __init__(self, profile: LLMProfile, transport=None):
        if not profile.endpoint and transport is None:
            raise BackendError("LLM backend requires a configured endpoint")
        self.profile = profile
        self.name = profile.backend_name
        self._transport = transport or self._http_transport

    def _http_transport(self, payload: dict[str, Any]) -> dict[str, Any]:
        body = json.dumps(payload).encode("utf-8")
        request = urllib.request.Request(
            self.profile.endpoint,
            data=body,
            headers={
                "Content-Type": "application/json",
                **({"Authorization": f"Bearer {self.profile.api_key}"} if self.profile.api_key else {}),
            },
        )
        try:
            with urllib.request.urlopen(request, timeout=self.profile.timeout) as response:
                return json.loads(response.read().decode("utf-8"))
        except Exception as exc:
            raise BackendError(f"LLM backend call failed: {exc}") from exc

    def reset(self, repo_id: str) -> None:
        return None

    def run_phase(self, repo_id: str, phase: str, prompt: str, sandbox: Sandbox) -> PhaseOutcome:
        driver = ""
        try:
            driver = load_driver_prompt(
                self.name, cwd=str(sandbox.root), agentify_md_path=str(sandbox.root / "agentify.md"),
                target_port=0,
            )
        except (FileNotFoundError, KeyError):
            pass
        response = self._transport(
            {
                "repo_id": repo_id,
                "phase": phase,
                "model": self.profile.model,
                "prompt": (driver + "\n\n" + prompt).strip(),
            }
        )
        if not isinstance(response, dict) or "actions" not in response:
            raise BackendError("LLM backend returned an unusable response")
        outcome = PhaseOutcome(phase=phase, tokens=int(response.get("tokens", 0)))
        _apply_actions(list(response["actions"]), sandbox, outcome)
        return outcome
