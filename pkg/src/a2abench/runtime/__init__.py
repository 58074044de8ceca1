from .client import A2AClient
from .deploy import (
    AgentHandle,
    NoFreePortError,
    StartupTimeoutError,
    deploy_agent,
    fetch_card_bytes,
    release_port,
    reserve_port,
    verify_deployment,
)
from .types import DeploymentVerdict, ExecutionTrace, HandleState, TraceStep

__all__ = [
    "A2AClient",
    "AgentHandle",
    "DeploymentVerdict",
    "ExecutionTrace",
    "HandleState",
    "NoFreePortError",
    "StartupTimeoutError",
    "TraceStep",
    "deploy_agent",
    "fetch_card_bytes",
    "release_port",
    "reserve_port",
    "verify_deployment",
]
