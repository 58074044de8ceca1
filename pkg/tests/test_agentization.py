"""Agentization pipeline: environment, tools, inner agent, card, retries."""

import json
import shutil

import pytest

from a2abench.agentization import (
    AgentizationRecord,
    AttemptRecord,
    Budget,
    ContractError,
    FailureClass,
    NoValidatedToolsError,
    Sandbox,
    ScriptedBackend,
    SetupFailure,
    ZeroToolsError,
    agentize,
    extract_tools,
    find_generic_skills,
    generate_agent_card,
    instantiate_inner_agent,
    synthesize_environment,
)
from a2abench.agentization.backends import BackendError, load_driver_prompt, load_phase_prompt
from a2abench.agentization.types import AgentBundle, ExtractedTool
from a2abench.asset_model import RepoRecord, decompose_repository, load_repo_registry
from a2abench.protocol import validate_agent_card

PORTS = (43000, 43099)


@pytest.fixture()
def textkit_record(fixtures_dir):
    records = load_repo_registry(fixtures_dir / "registry.json")
    return next(r for r in records if r.repo_id == "textkit")


@pytest.fixture()
def backend(fixtures_dir):
    return ScriptedBackend(fixtures_dir / "scripted")


def run_env_and_tools(record, backend, tmp_path):
    sandbox = Sandbox.create(record.workspace.root, tmp_path / "sb" / record.repo_id)
    backend.reset(record.repo_id)
    env, _ = synthesize_environment(record.workspace, backend, sandbox, record.repo_id)
    tools, _ = extract_tools(record.workspace, env, backend, sandbox, record.repo_id)
    return sandbox, env, tools


class TestSynthesizeEnvironment:
    def test_zero_dependency_repo_verified_with_isolated_interpreter(
        self, textkit_record, backend, tmp_path
    ):
        sandbox = Sandbox.create(textkit_record.workspace.root, tmp_path / "sb")
        backend.reset("textkit")
        env, outcome = synthesize_environment(textkit_record.workspace, backend, sandbox, "textkit")
        assert env.verified
        assert any("venv" in c for c in env.setup_commands)
        assert env.interpreter_path.endswith(".venv/bin/python")
        assert env.env_vars["REPO_ROOT"] == str(sandbox.root)
        assert outcome.tokens > 0

    def test_empty_workspace_verified_by_probe_alone(self, tmp_path):
        # No dep or conf files and an empty script: the probe still verifies.
        (tmp_path / "repo").mkdir()
        (tmp_path / "repo" / "README.md").write_text("bare\n")
        workspace = decompose_repository(tmp_path / "repo")
        script_dir = tmp_path / "scripts"
        script_dir.mkdir()
        (script_dir / "bare.json").write_text(
            json.dumps([{"phase": "environment", "actions": [], "tokens": 10}])
        )
        env, _ = synthesize_environment(workspace, ScriptedBackend(script_dir), repo_id="bare")
        assert env.setup_commands != []
        assert env.verified
        assert workspace.dep_files == [] and workspace.conf_files == []

    def test_failing_setup_command_raises_with_command_and_output(self, textkit_record, tmp_path):
        script_dir = tmp_path / "scripts"
        script_dir.mkdir()
        (script_dir / "textkit.json").write_text(
            json.dumps(
                [
                    {
                        "phase": "environment",
                        "actions": [
                            {
                                "type": "run_command",
                                "payload": {"command": '{python} -c "import sys; sys.exit(3)"'},
                            }
                        ],
                        "tokens": 5,
                    }
                ]
            )
        )
        sandbox = Sandbox.create(textkit_record.workspace.root, tmp_path / "sb")
        with pytest.raises(SetupFailure) as exc:
            synthesize_environment(
                textkit_record.workspace, ScriptedBackend(script_dir), sandbox, "textkit"
            )
        assert "sys.exit(3)" in exc.value.command

    def test_recovery_trajectory_replay_verifies_after_recorded_sequence(
        self, fixtures_dir, tmp_path
    ):
        # 22 package operations (failures tolerated), then a sync, then the probe.
        backend = ScriptedBackend(fixtures_dir / "scripted_cases")
        source = fixtures_dir / "repos" / "chemcalc"
        sandbox = Sandbox.create(source, tmp_path / "sb")
        workspace = decompose_repository(sandbox.root)
        env, _ = synthesize_environment(workspace, backend, sandbox, "aizynth_replay")
        assert env.verified
        assert len(env.setup_commands) >= 22


class TestExtractTools:
    def test_two_tools_validated_against_hand_computed_outputs(
        self, textkit_record, backend, tmp_path
    ):
        sandbox, env, tools = run_env_and_tools(textkit_record, backend, tmp_path)
        by_id = {t.tool_id: t for t in tools}
        assert by_id["to_upper"].validated
        assert by_id["word_count"].validated
        # Oracle: invoke the underlying scripts directly and compare.
        upper = sandbox.run(sandbox.render("{python} {repo}/tools/to_upper.py hello"))
        assert upper.stdout.strip() == "HELLO"
        count = sandbox.run(sandbox.render("{python} {repo}/tools/word_count.py data/sample.txt"))
        assert count.stdout.strip() == "5"

    def test_type_signature_mismatch_leaves_tool_unvalidated(self, fixtures_dir, tmp_path):
        backend = ScriptedBackend(fixtures_dir / "scripted_cases")
        source = fixtures_dir / "repos" / "textkit"
        sandbox = Sandbox.create(source, tmp_path / "sb")
        workspace = decompose_repository(sandbox.root)
        env, _ = synthesize_environment(workspace, backend, sandbox, "badtool")
        tools, _ = extract_tools(workspace, env, backend, sandbox, "badtool")
        by_id = {t.tool_id: t for t in tools}
        assert by_id["to_upper"].validated
        assert not by_id["segment_points"].validated

    def test_empty_emission_is_zero_tools_failure(self, textkit_record, tmp_path):
        script_dir = tmp_path / "scripts"
        script_dir.mkdir()
        (script_dir / "textkit.json").write_text(
            json.dumps(
                [
                    {"phase": "environment", "actions": [], "tokens": 1},
                    {"phase": "tools", "actions": [{"type": "emit_skills", "payload": {"tools": []}}], "tokens": 1},
                ]
            )
        )
        backend = ScriptedBackend(script_dir)
        sandbox = Sandbox.create(textkit_record.workspace.root, tmp_path / "sb")
        env, _ = synthesize_environment(textkit_record.workspace, backend, sandbox, "textkit")
        with pytest.raises(ZeroToolsError):
            extract_tools(textkit_record.workspace, env, backend, sandbox, "textkit")


class TestInnerAgent:
    def test_config_references_only_validated_tools(self, textkit_record, backend, tmp_path):
        _, env, tools = run_env_and_tools(textkit_record, backend, tmp_path)
        tools[0].validated = False
        config = instantiate_inner_agent(textkit_record.workspace, env, tools)
        expected = {t.tool_id for t in tools if t.validated}
        assert set(config.tool_ids) == expected
        assert config.reasoning_loop == "react"
        assert "textkit" in config.system_prompt

    def test_no_validated_tools_is_an_error(self, textkit_record, backend, tmp_path):
        _, env, tools = run_env_and_tools(textkit_record, backend, tmp_path)
        for tool in tools:
            tool.validated = False
        with pytest.raises(NoValidatedToolsError):
            instantiate_inner_agent(textkit_record.workspace, env, tools)


class TestGenerateAgentCard:
    def test_card_strictly_validates_with_one_skill_per_tool(
        self, textkit_record, backend, tmp_path
    ):
        _, env, tools = run_env_and_tools(textkit_record, backend, tmp_path)
        card = generate_agent_card(
            textkit_record.workspace, tools, "http://127.0.0.1:43000", "textkit"
        )
        assert validate_agent_card(card, mode="strict").valid
        assert len(card.skills) == len(tools)
        assert card.url == "http://127.0.0.1:43000"

    def test_descriptions_never_generic(self, textkit_record):
        tool = ExtractedTool(
            tool_id="separate_audio",
            name="separate_audio",
            description="Generic repository agent",
            entry_command="{python} -c pass",
            validated=True,
        )
        card = generate_agent_card(
            textkit_record.workspace, [tool], "http://127.0.0.1:43001", "textkit"
        )
        assert find_generic_skills(card) == []
        assert card.skills[0].description != "Generic repository agent"

    def test_empty_tools_is_contract_error(self, textkit_record):
        with pytest.raises(ContractError):
            generate_agent_card(textkit_record.workspace, [], "http://127.0.0.1:43002")

    def test_grouping_map_merges_tools_into_one_skill(self, textkit_record, backend, tmp_path):
        _, env, tools = run_env_and_tools(textkit_record, backend, tmp_path)
        grouping = {"casing": ["to_upper", "upper_file"]}
        card = generate_agent_card(
            textkit_record.workspace, tools, "http://127.0.0.1:43003", "textkit", grouping=grouping
        )
        ids = {s.id for s in card.skills}
        assert "casing" in ids
        assert "to_upper" not in ids and "upper_file" not in ids
        assert len(card.skills) == len(tools) - 1


class TestAgentize:
    def test_happy_path_single_attempt(self, fixtures_dir, backend, tmp_path):
        records = load_repo_registry(fixtures_dir / "registry.json")
        for record in records:
            result = agentize(record, backend, Budget(max_tries=1), tmp_path, PORTS)
            assert result.attempts == [
                AttemptRecord(try_index=1, success=True, tokens=result.attempts[0].tokens)
            ]
            assert result.attempts[0].tokens > 0
            assert result.bundle is not None
            assert validate_agent_card(result.bundle.card).valid

    def test_schema_noncompliance_then_success_contributes_two_tries(
        self, fixtures_dir, tmp_path
    ):
        source = fixtures_dir / "repos" / "textkit"
        repo_root = tmp_path / "retry_schema"
        shutil.copytree(source, repo_root)
        record = RepoRecord(
            repo_id="retry_schema",
            domain=next(iter(load_repo_registry(fixtures_dir / "registry.json"))).domain,
            workspace=decompose_repository(repo_root),
            ground_truth_skills=[],
        )
        backend = ScriptedBackend(fixtures_dir / "scripted_cases")
        result = agentize(record, backend, Budget(max_tries=3), tmp_path / "work", PORTS)
        assert [a.success for a in result.attempts] == [False, True]
        assert result.attempts[0].failure_class is FailureClass.SCHEMA_NONCOMPLIANCE
        assert result.tries() == 2
        assert result.bundle is not None

    def test_unusable_skills_failure_class_when_nothing_validates(self, fixtures_dir, tmp_path):
        script_dir = tmp_path / "scripts"
        script_dir.mkdir()
        broken_tool = {
            "tool_id": "broken",
            "name": "broken",
            "description": "always fails its sample run",
            "entry_command": '{python} -c "import sys; sys.exit(1)"',
            "input_schema": {},
            "sample_args": {},
        }
        (script_dir / "textkit.json").write_text(
            json.dumps(
                [
                    {"phase": "environment", "actions": [], "tokens": 10},
                    {
                        "phase": "tools",
                        "actions": [{"type": "emit_skills", "payload": {"tools": [broken_tool]}}],
                        "tokens": 10,
                    },
                ]
            )
        )
        records = load_repo_registry(fixtures_dir / "registry.json")
        record = next(r for r in records if r.repo_id == "textkit")
        result = agentize(record, ScriptedBackend(script_dir), Budget(max_tries=1), tmp_path, PORTS)
        assert not result.succeeded()
        assert result.attempts[0].failure_class is FailureClass.UNUSABLE_SKILLS

    def test_backend_error_failure_class(self, fixtures_dir, tmp_path):
        records = load_repo_registry(fixtures_dir / "registry.json")
        record = next(r for r in records if r.repo_id == "textkit")
        result = agentize(
            record, ScriptedBackend(tmp_path / "nowhere"), Budget(max_tries=2), tmp_path, PORTS
        )
        assert [a.failure_class for a in result.attempts] == [
            FailureClass.BACKEND_ERROR,
            FailureClass.BACKEND_ERROR,
        ]

    def test_tokens_sum_across_failed_attempts(self, fixtures_dir, tmp_path):
        source = fixtures_dir / "repos" / "textkit"
        repo_root = tmp_path / "retry_schema"
        shutil.copytree(source, repo_root)
        record = RepoRecord(
            repo_id="retry_schema",
            domain=next(iter(load_repo_registry(fixtures_dir / "registry.json"))).domain,
            workspace=decompose_repository(repo_root),
            ground_truth_skills=[],
        )
        backend = ScriptedBackend(fixtures_dir / "scripted_cases")
        result = agentize(record, backend, Budget(max_tries=3), tmp_path / "work", PORTS)
        assert result.total_tokens() == sum(a.tokens for a in result.attempts)
        assert result.attempts[0].tokens > 0 and result.attempts[1].tokens > 0

    def test_determinism_identical_records_for_identical_inputs(
        self, fixtures_dir, backend, tmp_path
    ):
        records = load_repo_registry(fixtures_dir / "registry.json")
        record = next(r for r in records if r.repo_id == "chemcalc")
        first = agentize(record, backend, Budget(max_tries=1), tmp_path / "one", PORTS)
        second = agentize(record, backend, Budget(max_tries=1), tmp_path / "two", PORTS)
        # Sandbox paths and ports differ run to run; attempt metadata must not.
        assert json.dumps([a.to_dict() for a in first.attempts], sort_keys=True) == json.dumps(
            [a.to_dict() for a in second.attempts], sort_keys=True
        )

    def test_record_invariants_enforced(self):
        record = AgentizationRecord(
            repo_id="x",
            attempts=[AttemptRecord(try_index=2, success=False, tokens=1, failure_class=FailureClass.BACKEND_ERROR)],
        )
        with pytest.raises(ValueError):
            record.validate()


class TestScriptedBackendContract:
    def test_phase_mismatch_is_backend_error(self, fixtures_dir, tmp_path):
        backend = ScriptedBackend(fixtures_dir / "scripted")
        backend.reset("textkit")
        sandbox = Sandbox.create(fixtures_dir / "repos" / "textkit", tmp_path / "sb")
        with pytest.raises(BackendError):
            backend.run_phase("textkit", "card", "", sandbox)

    def test_prompt_templates_render(self):
        for phase in ("environment", "tools", "inner", "card"):
            text = load_phase_prompt(phase, cwd="/sb", agentify_md_path="/sb/agentify.md", target_port=4321)
            assert "/sb" in text
        for name in ("claude_code", "codex", "openhands", "envx"):
            text = load_driver_prompt(name, cwd="/sb", agentify_md_path="/sb/agentify.md", target_port=4321)
            assert "agentify" in text


class TestBundleSerialization:
    def test_round_trip(self, fixtures_dir, backend, tmp_path):
        records = load_repo_registry(fixtures_dir / "registry.json")
        record = next(r for r in records if r.repo_id == "chemcalc")
        result = agentize(record, backend, Budget(max_tries=1), tmp_path, PORTS)
        blob = json.dumps(result.to_dict(), sort_keys=True)
        restored = AgentizationRecord.from_dict(json.loads(blob))
        assert json.dumps(restored.to_dict(), sort_keys=True) == blob
        assert isinstance(restored.bundle, AgentBundle)
