from .backends import (
    BackendError,
    CodeAgentBackend,
    LLMBackend,
    LLMProfile,
    PhaseOutcome,
    ScriptedBackend,
    load_driver_prompt,
    load_phase_prompt,
)
from .pipeline import (
    Budget,
    ContractError,
    GENERIC_DESCRIPTION,
    NoValidatedToolsError,
    SetupFailure,
    ZeroToolsError,
    agentize,
    extract_tools,
    find_generic_skills,
    generate_agent_card,
    instantiate_inner_agent,
    synthesize_environment,
)
from .sandbox import CommandResult, Sandbox
from .types import (
    AgentBundle,
    AgentizationRecord,
    AttemptRecord,
    EnvironmentSpec,
    ExtractedTool,
    FailureClass,
    InnerAgentConfig,
)

__all__ = [
    "AgentBundle",
    "AgentizationRecord",
    "AttemptRecord",
    "BackendError",
    "Budget",
    "CodeAgentBackend",
    "CommandResult",
    "ContractError",
    "EnvironmentSpec",
    "ExtractedTool",
    "FailureClass",
    "GENERIC_DESCRIPTION",
    "InnerAgentConfig",
    "LLMBackend",
    "LLMProfile",
    "NoValidatedToolsError",
    "PhaseOutcome",
    "Sandbox",
    "ScriptedBackend",
    "SetupFailure",
    "ZeroToolsError",
    "agentize",
    "extract_tools",
    "find_generic_skills",
    "generate_agent_card",
    "instantiate_inner_agent",
    "load_driver_prompt",
    "load_phase_prompt",
    "synthesize_environment",
]
