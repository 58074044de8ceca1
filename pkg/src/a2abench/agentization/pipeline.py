"""The four-stage agentization pipeline with retry and token accounting.

Stages run strictly in order per attempt: environment synthesis, tool
extraction, inner-agent instantiation, card generation. An attempt succeeds
only when the produced bundle deploys and its fetched card passes strict
validation; every attempt starts from a clean sandbox copy and all tokens
(including failed attempts) count toward the repository total.
"""

from __future__ import annotations

import logging
import tempfile
from dataclasses import dataclass
from pathlib import Path

from ..asset_model import RepoRecord, RepoWorkspace
from ..protocol import AgentCard, AgentSkill, parse_agent_card, validate_agent_card
from .backends import BackendError, CodeAgentBackend, PhaseOutcome, load_phase_prompt
from .sandbox import Sandbox
from .types import (
    AgentBundle,
    AgentizationRecord,
    AttemptRecord,
    EnvironmentSpec,
    ExtractedTool,
    FailureClass,
    InnerAgentConfig,
)

log = logging.getLogger(__name__)

GENERIC_DESCRIPTION = "Generic repository agent"

DEFAULT_PORT_RANGE = (42000, 42999)


class SetupFailure(RuntimeError):
    """A setup command failed; carries the command and its captured output."""

    def __init__(self, command: str, output: str):
        super().__init__(f"setup command failed: {command}\n{output}")
        self.command = command
        self.output = output


class ZeroToolsError(RuntimeError):
    """The backend produced no tool candidates at all."""


class NoValidatedToolsError(RuntimeError):
    pass


class ContractError(ValueError):
    pass


@dataclass
class Budget:
    max_tries: int = 1
    token_budget: int | None = None

    def __post_init__(self) -> None:
        if self.max_tries < 1:
            raise ContractError("max_tries must be >= 1")


def _phase_prompt(phase: str, sandbox: Sandbox, port: int = 0) -> str:
    return load_phase_prompt(
        phase,
        cwd=str(sandbox.root),
        agentify_md_path=str(sandbox.root / "agentify.md"),
        target_port=port,
    )


def _repo_id_for(workspace: RepoWorkspace, repo_id: str | None) -> str:
    return repo_id if repo_id is not None else workspace.root.name


def _probe_command(sandbox: Sandbox) -> str:
    """Entry-module probe: the repo smoke script when present, else an interpreter check."""
    if (sandbox.root / "smoke.py").exists():
        return f"{{python}} {sandbox.root / 'smoke.py'}"
    return "{python} -c pass"


def synthesize_environment(
    workspace: RepoWorkspace,
    backend: CodeAgentBackend,
    sandbox: Sandbox | None = None,
    repo_id: str | None = None,
) -> tuple[EnvironmentSpec, PhaseOutcome]:
    """Run the environment phase in a sandbox copy and probe the result.

    Setup commands that exit non-zero abort with a SetupFailure unless the
    backend marked them tolerable (exploratory trajectory replays do that);
    ``verified`` reflects only the final probe run.
    """
    repo_id = _repo_id_for(workspace, repo_id)
    if sandbox is None:
        sandbox = Sandbox.create(workspace.root, Path(tempfile.mkdtemp(prefix="a2a_env_")) / repo_id)

    outcome = backend.run_phase(repo_id, "environment", _phase_prompt("environment", sandbox), sandbox)
    spec = EnvironmentSpec()
    for executed in outcome.commands:
        spec.setup_commands.append(executed.result.command)
        if not executed.result.ok and not executed.allow_failure:
            raise SetupFailure(executed.result.command, executed.result.stdout + executed.result.stderr)

    spec.interpreter_path = sandbox.interpreter()
    probe = sandbox.run(sandbox.render(_probe_command(sandbox)))
    spec.setup_commands.append(probe.command)
    spec.verified = probe.ok
    spec.env_vars["REPO_ROOT"] = str(sandbox.root)
    if not probe.ok:
        log.warning("probe failed for %s: %s", repo_id, (probe.stdout + probe.stderr)[:500])
    return spec, outcome


def _validate_tool(tool: ExtractedTool, env: EnvironmentSpec, sandbox: Sandbox) -> bool:
    """One sample invocation; True iff it exits cleanly."""
    args = dict(tool.sample_args)
    for param in tool.input_schema:
        if param not in args:
            return False
        # Sample file arguments are repo-relative.
        if tool.input_schema[param].lower() in ("path", "file"):
            candidate = sandbox.root / args[param]
            if candidate.exists():
                args[param] = str(candidate)
    if "{out}" in tool.entry_command:
        probe_dir = sandbox.root / ".tool_probe"
        probe_dir.mkdir(exist_ok=True)
        args["out"] = str(probe_dir / f"{tool.tool_id}{tool.output_ext or '.out'}")
    command = sandbox.render(tool.entry_command, **args)
    result = sandbox.run(command, env=dict(env.env_vars))
    return result.ok


def extract_tools(
    workspace: RepoWorkspace,
    env: EnvironmentSpec,
    backend: CodeAgentBackend,
    sandbox: Sandbox | None = None,
    repo_id: str | None = None,
) -> tuple[list[ExtractedTool], PhaseOutcome]:
    """Tool phase: wrap backend-emitted candidates and validate each by sample run.

    Candidates whose sample invocation fails come back with
    ``validated=False`` (they count toward the unusable-skills failure
    class); an empty candidate set is a ZeroToolsError.
    """
    if not env.verified:
        raise ContractError("environment must be verified before tool extraction")
    repo_id = _repo_id_for(workspace, repo_id)
    if sandbox is None:
        sandbox = Sandbox(Path(env.env_vars.get("REPO_ROOT", workspace.root)))

    outcome = backend.run_phase(repo_id, "tools", _phase_prompt("tools", sandbox), sandbox)
    raw_tools = outcome.tools or []
    if not raw_tools:
        raise ZeroToolsError(f"backend emitted no tool candidates for '{repo_id}'")

    tools: list[ExtractedTool] = []
    seen: set[str] = set()
    for raw in raw_tools:
        tool = ExtractedTool.from_dict(raw)
        if tool.tool_id in seen:
            raise BackendError(f"duplicate tool_id '{tool.tool_id}' for '{repo_id}'")
        seen.add(tool.tool_id)
        tool.validated = _validate_tool(tool, env, sandbox)
        tools.append(tool)
    return tools, outcome


def instantiate_inner_agent(
    workspace: RepoWorkspace,
    env: EnvironmentSpec,
    tools: list[ExtractedTool],
) -> InnerAgentConfig:
    """Bind the validated tools into a ReAct-loop configuration."""
    validated = [t for t in tools if t.validated]
    if not validated:
        raise NoValidatedToolsError("inner agent needs at least one validated tool")
    readme_summary = workspace.readme_text(limit=600).strip() or "(no readme)"
    roster = "\n".join(f"- {t.tool_id}: {t.description}" for t in validated)
    system_prompt = (
        "You are the serving agent for this repository.\n\n"
        f"Repository summary:\n{readme_summary}\n\n"
        f"Available tools:\n{roster}\n\n"
        "Answer each task by selecting exactly one tool, binding its "
        "parameters from the task parts, and returning its output."
    )
    return InnerAgentConfig(system_prompt=system_prompt, tool_ids=[t.tool_id for t in validated])


def generate_agent_card(
    workspace: RepoWorkspace,
    tools: list[ExtractedTool],
    endpoint: str,
    repo_id: str | None = None,
    grouping: dict[str, list[str]] | None = None,
) -> AgentCard:
    """Derive a strictly-valid card from the tool roster and readme context.

    One skill per tool by default; ``grouping`` may merge several tools into
    one advertised capability. Descriptions are never empty and never the
    generic placeholder that makes agents indistinguishable.
    """
    if not tools:
        raise ContractError("card generation requires at least one tool")
    repo_id = _repo_id_for(workspace, repo_id)
    readme_first_line = next(
        (line.strip() for line in workspace.readme_text(limit=400).splitlines() if line.strip()),
        "",
    ).lstrip("# ")

    def describe(description: str, name: str) -> str:
        text = description.strip()
        if not text or text == GENERIC_DESCRIPTION:
            text = f"{name} capability of the {repo_id} repository"
            if readme_first_line:
                text += f" ({readme_first_line})"
        return text

    skills: list[AgentSkill] = []
    if grouping:
        by_id = {t.tool_id: t for t in tools}
        for group_id, member_ids in grouping.items():
            members = [by_id[m] for m in member_ids if m in by_id]
            if not members:
                continue
            description = "; ".join(describe(m.description, m.name) for m in members)
            tags = sorted({tag for m in members for tag in m.tags})
            skills.append(
                AgentSkill(
                    id=group_id,
                    name=members[0].name,
                    description=description,
                    tags=tags,
                    input_modes=["text/plain"],
                    output_modes=["text/plain"],
                )
            )
        grouped = {m for ids in grouping.values() for m in ids}
        remaining = [t for t in tools if t.tool_id not in grouped]
    else:
        remaining = list(tools)
    for tool in remaining:
        skills.append(
            AgentSkill(
                id=tool.tool_id,
                name=tool.name,
                description=describe(tool.description, tool.name),
                tags=list(tool.tags),
                input_modes=["text/plain"],
                output_modes=["text/plain"],
            )
        )

    card = AgentCard(
        name=f"{repo_id}_agent",
        description=describe(readme_first_line, repo_id),
        version="1.0.0",
        url=endpoint,
        capabilities={"streaming": False},
        default_input_modes=["text/plain"],
        default_output_modes=["text/plain"],
        skills=skills,
    )
    report = validate_agent_card(card, mode="strict")
    if not report.valid:  # pragma: no cover - construction guarantees validity
        raise ContractError(f"generated card failed strict validation: {report.failures}")
    return card


def find_generic_skills(card: AgentCard) -> list[str]:
    """Skill ids whose description is the generic placeholder (a lint)."""
    return [s.id for s in card.skills if s.description.strip() == GENERIC_DESCRIPTION]


def agentize(
    record: RepoRecord,
    backend: CodeAgentBackend,
    budget: Budget,
    work_dir: Path | str | None = None,
    port_range: tuple[int, int] = DEFAULT_PORT_RANGE,
) -> AgentizationRecord:
    """Run the full pipeline with retries; all outcomes land in the record.

    Each attempt copies the repository into a fresh sandbox, runs the four
    phases in order, then deploys the bundle and verifies the fetched card.
    Attempts stop at the first success, at ``max_tries``, or once the token
    budget is exhausted.
    """
    from ..runtime.deploy import StartupTimeoutError, deploy_agent, verify_deployment

    repo_id = record.repo_id
    backend.reset(repo_id)
    work_dir = (
        Path(work_dir) if work_dir is not None else Path(tempfile.mkdtemp(prefix="a2a_agentize_"))
    )

    result = AgentizationRecord(repo_id=repo_id)
    for try_index in range(1, budget.max_tries + 1):
        if budget.token_budget is not None and result.total_tokens() >= budget.token_budget:
            break
        tokens = 0
        failure: FailureClass | None = None
        bundle: AgentBundle | None = None
        sandbox = Sandbox.create(record.workspace.root, work_dir / repo_id / f"attempt_{try_index}")
        try:
            env, outcome = synthesize_environment(record.workspace, backend, sandbox, repo_id)
            tokens += outcome.tokens
            if not env.verified:
                raise SetupFailure("(probe)", "environment probe failed")

            tools, outcome = extract_tools(record.workspace, env, backend, sandbox, repo_id)
            tokens += outcome.tokens
            validated = [t for t in tools if t.validated]
            if not validated:
                failure = FailureClass.UNUSABLE_SKILLS
                raise NoValidatedToolsError(f"no tool of '{repo_id}' survived validation")

            inner = instantiate_inner_agent(record.workspace, env, tools)
            outcome = backend.run_phase(repo_id, "inner", _phase_prompt("inner", sandbox), sandbox)
            tokens += outcome.tokens

            port = None
            try:
                from ..runtime.deploy import release_port, reserve_port

                port = reserve_port(port_range)
                endpoint = f"http://127.0.0.1:{port}"
                outcome = backend.run_phase(
                    repo_id, "card", _phase_prompt("card", sandbox, port), sandbox
                )
                tokens += outcome.tokens
                if outcome.card is not None:
                    import json as _json

                    card = parse_agent_card(_json.dumps(outcome.card))
                    if not card.url:
                        card.url = endpoint
                else:
                    card = generate_agent_card(record.workspace, validated, endpoint, repo_id)

                bundle = AgentBundle(
                    repo_id=repo_id, environment=env, tools=tools, inner=inner, card=card
                )

                report = validate_agent_card(card, mode="strict")
                if not report.valid:
                    failure = FailureClass.SCHEMA_NONCOMPLIANCE
                    bundle = None
                else:
                    release_port(port)  # deploy_agent re-reserves the card's port
                    port = None
                    handle = deploy_agent(bundle, port_range)
                    try:
                        verdict = verify_deployment(handle.endpoint)
                    finally:
                        handle.stop()
                    if not verdict.card_retrievable:
                        failure = FailureClass.STARTUP_FAILURE
                        bundle = None
                    elif not verdict.schema_valid:
                        failure = FailureClass.SCHEMA_NONCOMPLIANCE
                        bundle = None
            finally:
                if port is not None:
                    release_port(port)
        except BackendError as exc:
            log.warning("backend error for %s try %d: %s", repo_id, try_index, exc)
            failure = FailureClass.BACKEND_ERROR
            bundle = None
        except SetupFailure as exc:
            log.info("setup failure for %s try %d: %s", repo_id, try_index, exc)
            failure = FailureClass.STARTUP_FAILURE
            bundle = None
        except (ZeroToolsError, NoValidatedToolsError) as exc:
            log.info("unusable skills for %s try %d: %s", repo_id, try_index, exc)
            failure = FailureClass.UNUSABLE_SKILLS
            bundle = None
        except StartupTimeoutError as exc:
            log.info("startup timeout for %s try %d: %s", repo_id, try_index, exc)
            failure = FailureClass.STARTUP_FAILURE
            bundle = None

        success = bundle is not None and failure is None
        result.attempts.append(
            AttemptRecord(
                try_index=try_index,
                success=success,
                tokens=tokens,
                failure_class=None if success else (failure or FailureClass.BACKEND_ERROR),
            )
        )
        if success:
            result.bundle = bundle
            break

    result.validate()
    return result
