"""Deploy agent bundles as live loopback A2A servers and verify them.

Each agent runs as a child process of the serving shim; the deployment
controller owns every live handle, guarantees port exclusivity, and tears
processes down idempotently. Health checking polls the card route (the
shim also prints a ready line; polling starts immediately and gives up
after the equivalent of ten 500 ms card-fetch windows).
"""

from __future__ import annotations

import json
import socket
import subprocess
import sys
import threading
import time
import urllib.error
import urllib.request
from dataclasses import dataclass, field
from pathlib import Path

from ..agentization.types import AgentBundle
from ..protocol import CARD_ROUTE, parse_agent_card, validate_agent_card
from .types import DeploymentVerdict, HandleState

HEALTH_ATTEMPTS = 10
HEALTH_SPACING = 0.5
_POLL_INTERVAL = 0.05


class NoFreePortError(RuntimeError):
    pass


class StartupTimeoutError(RuntimeError):
    pass


_lock = threading.Lock()
_reserved_ports: set[int] = set()
_live_handles: set[tuple[str, int]] = set()


def _port_free(port: int) -> bool:
    with socket.socket(socket.AF_INET, socket.SOCK_STREAM) as sock:
        try:
            sock.bind(("127.0.0.1", port))
            return True
        except OSError:
            return False


def reserve_port(port_range: tuple[int, int], preferred: int | None = None) -> int:
    """Reserve the first free port in range (or the preferred one if usable)."""
    low, high = port_range
    if low > high:
        raise NoFreePortError(f"empty port range {port_range}")
    with _lock:
        candidates = []
        if preferred is not None and low <= preferred <= high:
            candidates.append(preferred)
        candidates.extend(p for p in range(low, high + 1) if p != preferred)
        for port in candidates:
            if port in _reserved_ports:
                continue
            if _port_free(port):
                _reserved_ports.add(port)
                return port
    raise NoFreePortError(f"no free port in {port_range}")


def release_port(port: int) -> None:
    with _lock:
        _reserved_ports.discard(port)


@dataclass
class AgentHandle:
    repo_id: str
    endpoint: str
    port: int
    process: subprocess.Popen | None = None
    state: HandleState = HandleState.STARTING
    _stopped: bool = field(default=False, repr=False)

    def stop(self) -> None:
        """Terminate the server process; safe to call twice."""
        if self._stopped:
            return
        self._stopped = True
        if self.process is not None and self.process.poll() is None:
            self.process.terminate()
            try:
                self.process.wait(timeout=5)
            except subprocess.TimeoutExpired:
                self.process.kill()
                self.process.wait(timeout=5)
        with _lock:
            _live_handles.discard((self.repo_id, self.port))
        release_port(self.port)
        if self.state is not HandleState.FAILED:
            self.state = HandleState.STOPPED


def fetch_card_bytes(endpoint: str, timeout: float = 5.0) -> bytes:
    with urllib.request.urlopen(endpoint.rstrip("/") + CARD_ROUTE, timeout=timeout) as response:
        return response.read()


def _card_port(card_url: str) -> int | None:
    if ":" not in card_url:
        return None
    tail = card_url.rstrip("/").rsplit(":", 1)[-1]
    return int(tail) if tail.isdigit() else None


def deploy_agent(
    bundle: AgentBundle,
    port_range: tuple[int, int],
    run_root: Path | str | None = None,
    health_timeout: float = HEALTH_ATTEMPTS * HEALTH_SPACING,
) -> AgentHandle:
    """Serve a bundle on the first free port in range and health-check it.

    The bundle's card is served verbatim; when the card already names a port
    inside the range, that port is preferred so the served URL stays true.
    """
    report = validate_agent_card(bundle.card, mode="strict")
    if not report.valid:
        raise ValueError(f"bundle card fails strict validation: {sorted(report.rule_ids())}")
    repo_root = Path(bundle.repo_root())
    if not repo_root.is_dir():
        raise ValueError(f"bundle repo root missing: {repo_root}")

    port = reserve_port(port_range, preferred=_card_port(bundle.card.url))
    endpoint = f"http://127.0.0.1:{port}"
    run_root = Path(run_root) if run_root is not None else repo_root / "agent_runtime"
    run_root.mkdir(parents=True, exist_ok=True)

    card_path = repo_root / "card.json"
    card_path.write_bytes(bundle.card_bytes())
    skills_path = repo_root / "skills.json"
    skills_path.write_text(
        json.dumps([t.to_dict() for t in bundle.tools], indent=2) + "\n", encoding="utf-8"
    )
    env_lines = {
        "PORT": str(port),
        "REPO_ROOT": str(repo_root),
        "SKILLS_PATH": str(skills_path),
        "CARD_PATH": str(card_path),
        "RUN_ROOT": str(run_root),
        "INTERPRETER_PATH": bundle.environment.interpreter_path or sys.executable,
    }
    for key, value in bundle.environment.env_vars.items():
        env_lines.setdefault(key, value)
    env_path = repo_root / ".env"
    env_path.write_text("".join(f"{k}={v}\n" for k, v in env_lines.items()), encoding="utf-8")

    process = subprocess.Popen(
        [sys.executable, "-m", "a2abench.runtime.server", "--env-file", str(env_path)],
        stdout=subprocess.DEVNULL,
        stderr=subprocess.DEVNULL,
    )
    handle = AgentHandle(repo_id=bundle.repo_id, endpoint=endpoint, port=port, process=process)

    deadline = time.monotonic() + health_timeout
    while time.monotonic() < deadline:
        if process.poll() is not None:
            break
        try:
            fetch_card_bytes(endpoint, timeout=1.0)
            handle.state = HandleState.HEALTHY
            with _lock:
                _live_handles.add((bundle.repo_id, port))
            return handle
        except (urllib.error.URLError, OSError):
            time.sleep(_POLL_INTERVAL)

    handle.state = HandleState.FAILED
    handle.stop()
    handle.state = HandleState.FAILED
    raise StartupTimeoutError(f"agent for '{bundle.repo_id}' did not become healthy on port {port}")


def verify_deployment(endpoint: str, timeout: float = 5.0) -> DeploymentVerdict:
    """Fetch and strictly validate the card; never raises for protocol failures."""
    try:
        raw = fetch_card_bytes(endpoint, timeout=timeout)
    except Exception:
        return DeploymentVerdict(card_retrievable=False, schema_valid=False)
    try:
        card = parse_agent_card(raw)
    except Exception:
        return DeploymentVerdict(card_retrievable=True, schema_valid=False)
    report = validate_agent_card(card, mode="strict")
    return DeploymentVerdict(card_retrievable=True, schema_valid=report.valid)
