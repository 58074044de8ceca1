"""Generic A2A serving shim for agentized repositories.

Loads the card and ``skills.json`` named by an ``.env`` file and answers:

- ``GET /.well-known/agent.json`` with the card bytes
- ``POST /tasks/send`` by selecting a validated tool deterministically
  (token overlap against the request text), binding its parameters from
  the request parts, and running its entry command in the repository.

Without a live reasoning backend this shim is the scripted-mode inner
agent: tool choice and argument binding follow fixed, documented rules so
fixture runs are reproducible. Exits fast (code 2) when its configuration
is broken, which deployment reports as a startup failure.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import shlex
import subprocess
import sys
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from .. import textmatch
from ..protocol import (
    CARD_ROUTE,
    TASK_SEND_ROUTE,
    InvalidPartError,
    MessagePart,
    PartKind,
    TaskRequest,
    TaskResult,
    TaskStatus,
)

_QUOTED = re.compile(r'"([^"]+)"')
_INTEGER = re.compile(r"(?<![\w.])(\d+)(?![\w.])")

READY_PREFIX = "A2A_SERVER_READY"


def read_env_file(path: Path) -> dict[str, str]:
    env: dict[str, str] = {}
    for line in path.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#") or "=" not in line:
            continue
        key, _, value = line.partition("=")
        env[key.strip()] = value.strip()
    return env


class ToolBinder:
    """Deterministic tool selection and argument binding."""

    def __init__(self, tools: list[dict]):
        self.tools = [t for t in tools if t.get("validated")]

    def select(self, text: str) -> dict | None:
        request_tokens = textmatch.tokens(text)
        best: tuple[float, str] | None = None
        chosen = None
        for tool in self.tools:
            blob = textmatch.skill_text(
                tool.get("name", ""), tool.get("description", ""), tool.get("tags", [])
            )
            score = textmatch.jaccard(request_tokens, textmatch.tokens(blob))
            key = (-score, tool["tool_id"])
            if best is None or key < best:
                best = key
                chosen = tool
        return chosen

    @staticmethod
    def bind(tool: dict, text: str, file_parts: list[MessagePart]) -> dict[str, str]:
        """Bind parameters in schema order; raises KeyError naming the gap."""
        args: dict[str, str] = {}
        files = list(file_parts)
        quoted = _QUOTED.findall(text)
        integers = _INTEGER.findall(text)
        for param, semantic in tool.get("input_schema", {}).items():
            kind = semantic.lower()
            if kind in ("path", "file"):
                if not files:
                    raise KeyError(f"no file part available for parameter '{param}'")
                args[param] = files.pop(0).file_path
            elif kind in ("int", "integer", "number"):
                if not integers:
                    raise KeyError(f"no numeric literal in request for parameter '{param}'")
                args[param] = integers.pop(0)
            else:
                if quoted:
                    args[param] = quoted.pop(0)
                else:
                    words = text.replace('"', " ").split()
                    if not words:
                        raise KeyError(f"no text available for parameter '{param}'")
                    args[param] = words[-1].strip(".,;:!?")
        return args


class AgentServer:
    def __init__(self, env: dict[str, str]):
        self.port = int(env["PORT"])
        self.repo_root = Path(env["REPO_ROOT"])
        self.card_bytes = Path(env["CARD_PATH"]).read_bytes()
        self.skills_path = Path(env["SKILLS_PATH"])
        self.run_root = Path(env.get("RUN_ROOT", str(self.repo_root / "agent_runtime")))
        self.interpreter = env.get("INTERPRETER_PATH", sys.executable)
        self.tool_timeout = float(env.get("TOOL_TIMEOUT", "60"))
        self.extra_env = {
            k: v
            for k, v in env.items()
            if k not in {"PORT", "REPO_ROOT", "CARD_PATH", "SKILLS_PATH", "RUN_ROOT", "INTERPRETER_PATH", "TOOL_TIMEOUT"}
        }
        tools = json.loads(self.skills_path.read_text(encoding="utf-8"))
        self.binder = ToolBinder(tools)

    def check(self) -> None:
        if not self.repo_root.is_dir():
            raise FileNotFoundError(f"repo root missing: {self.repo_root}")
        if not Path(self.interpreter).exists():
            raise FileNotFoundError(f"interpreter missing: {self.interpreter}")

    def _log(self, task_id: str, message: str) -> None:
        log_dir = self.run_root / "traj_log" / task_id
        log_dir.mkdir(parents=True, exist_ok=True)
        with open(log_dir / "agent.log", "a", encoding="utf-8") as f:
            f.write(message.rstrip("\n") + "\n")

    def handle_task(self, request: TaskRequest) -> dict:
        started = time.monotonic()
        text = " ".join(p.text for p in request.parts if p.kind is PartKind.TEXT)
        file_parts = [p for p in request.parts if p.kind is PartKind.FILE]
        self._log(request.task_id, f"task text: {text}")

        def reply(status: TaskStatus, parts: list[MessagePart], transcript: str, steps, artifacts):
            result = TaskResult(
                task_id=request.task_id, status=status, parts=tuple(parts), transcript=transcript
            )
            body = result.to_dict()
            body["trace"] = {
                "task_id": request.task_id,
                "steps": steps,
                "artifacts": artifacts,
                "final_response": next(
                    (p.text for p in parts if p.kind is PartKind.TEXT), ""
                ),
                "wall_time": time.monotonic() - started,
            }
            return body

        for part in file_parts:
            if not Path(part.file_path).is_file():
                diagnostic = f"input file not found: {part.file_path}"
                self._log(request.task_id, diagnostic)
                return reply(
                    TaskStatus.REJECTED,
                    [MessagePart.from_text(diagnostic)],
                    diagnostic,
                    [{"action": "reject task", "tool_id": None, "output_excerpt": diagnostic}],
                    [],
                )

        tool = self.binder.select(text)
        if tool is None:
            diagnostic = "no validated tools are available"
            return reply(
                TaskStatus.REJECTED,
                [MessagePart.from_text(diagnostic)],
                diagnostic,
                [{"action": "reject task", "tool_id": None, "output_excerpt": diagnostic}],
                [],
            )

        try:
            args = self.binder.bind(tool, text, file_parts)
        except KeyError as exc:
            diagnostic = f"cannot bind tool '{tool['tool_id']}': {exc.args[0]}"
            self._log(request.task_id, diagnostic)
            return reply(
                TaskStatus.REJECTED,
                [MessagePart.from_text(diagnostic)],
                diagnostic,
                [{"action": f"bind {tool['tool_id']}", "tool_id": tool["tool_id"], "output_excerpt": diagnostic}],
                [],
            )

        command = tool["entry_command"]
        mapping = {"python": self.interpreter, "repo": str(self.repo_root), **args}
        out_path: Path | None = None
        if "{out}" in command:
            artifact_dir = self.run_root / "artifact" / request.task_id
            artifact_dir.mkdir(parents=True, exist_ok=True)
            out_path = artifact_dir / f"{tool['tool_id']}{tool.get('output_ext') or '.out'}"
            mapping["out"] = str(out_path)
        for key, value in mapping.items():
            command = command.replace("{" + key + "}", shlex.quote(str(value)))

        self._log(request.task_id, f"invoke {tool['tool_id']}: {command}")
        try:
            proc = subprocess.run(
                shlex.split(command),
                cwd=self.repo_root,
                capture_output=True,
                text=True,
                timeout=self.tool_timeout,
                env={**os.environ, **self.extra_env},
            )
            exit_code, stdout, stderr = proc.returncode, proc.stdout, proc.stderr
        except subprocess.TimeoutExpired:
            exit_code, stdout, stderr = 124, "", f"tool timed out after {self.tool_timeout}s"
        except FileNotFoundError as exc:
            exit_code, stdout, stderr = 127, "", str(exc)

        transcript = f"[exit {exit_code}] {command}\n{stdout}{stderr}"
        self._log(request.task_id, transcript)

        artifacts = [str(out_path)] if out_path is not None and out_path.exists() else []
        response_text = stdout.strip() or stderr.strip() or f"exit {exit_code}"
        parts: list[MessagePart] = [MessagePart.from_text(response_text)]
        for artifact in artifacts:
            parts.append(MessagePart.from_file(artifact, "text/plain"))
        status = TaskStatus.COMPLETED if exit_code == 0 else TaskStatus.FAILED
        steps = [
            {
                "action": f"invoke {tool['tool_id']}",
                "tool_id": tool["tool_id"],
                "output_excerpt": f"[exit {exit_code}] {response_text[:400]}",
            }
        ]
        return reply(status, parts, transcript, steps, artifacts)


def make_handler(agent: AgentServer):
    class Handler(BaseHTTPRequestHandler):
        def log_message(self, fmt, *args):  # quiet: logs go to per-task files
            pass

        def _send_json(self, code: int, payload: bytes) -> None:
            self.send_response(code)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(payload)))
            self.end_headers()
            self.wfile.write(payload)

        def do_GET(self):
            if self.path == CARD_ROUTE:
                self._send_json(200, agent.card_bytes)
            else:
                self._send_json(404, b'{"error": "not found"}')

        def do_POST(self):
            if self.path != TASK_SEND_ROUTE:
                self._send_json(404, b'{"error": "not found"}')
                return
            length = int(self.headers.get("Content-Length", "0"))
            raw = self.rfile.read(length)
            try:
                request = TaskRequest.from_dict(json.loads(raw.decode("utf-8")))
            except (json.JSONDecodeError, UnicodeDecodeError, InvalidPartError, ValueError) as exc:
                body = json.dumps(
                    {
                        "task_id": "",
                        "status": "rejected",
                        "parts": [{"kind": "text", "text": f"bad request: {exc}"}],
                        "transcript": f"bad request: {exc}",
                    }
                ).encode("utf-8")
                self._send_json(400, body)
                return
            response = agent.handle_task(request)
            self._send_json(200, json.dumps(response).encode("utf-8"))

    return Handler


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description="A2A agent serving shim")
    parser.add_argument("--env-file", required=True)
    args = parser.parse_args(argv)

    try:
        env = read_env_file(Path(args.env_file))
        agent = AgentServer(env)
        agent.check()
    except Exception as exc:
        print(f"agent startup failed: {exc}", file=sys.stderr, flush=True)
        return 2

    server = ThreadingHTTPServer(("127.0.0.1", agent.port), make_handler(agent))
    print(f"{READY_PREFIX} port={agent.port}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
