"""Loopback A2A client used by single-repo evaluation and the orchestrator."""

from __future__ import annotations

import json
import threading
import time
import urllib.error
import urllib.request

from ..protocol import TASK_SEND_ROUTE, MessagePart, TaskRequest, TaskResult, TaskStatus
from .types import ExecutionTrace, TraceStep


class A2AClient:
    """Sends task requests; sends to one endpoint are serialized."""

    def __init__(self):
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def _endpoint_lock(self, endpoint: str) -> threading.Lock:
        with self._locks_guard:
            if endpoint not in self._locks:
                self._locks[endpoint] = threading.Lock()
            return self._locks[endpoint]

    def send(
        self,
        endpoint: str,
        request: TaskRequest,
        timeout: float = 60.0,
        repo_id: str = "",
    ) -> tuple[TaskResult, ExecutionTrace]:
        """POST the request; failures come back as failed results, not raises."""
        started = time.monotonic()
        body = json.dumps(request.to_dict()).encode("utf-8")
        http_request = urllib.request.Request(
            endpoint.rstrip("/") + TASK_SEND_ROUTE,
            data=body,
            headers={"Content-Type": "application/json"},
        )
        try:
            with self._endpoint_lock(endpoint):
                with urllib.request.urlopen(http_request, timeout=timeout) as response:
                    payload = json.loads(response.read().decode("utf-8"))
        except (urllib.error.URLError, OSError, json.JSONDecodeError, TimeoutError) as exc:
            diagnostic = f"transport failure: {exc}"
            result = TaskResult(
                task_id=request.task_id,
                status=TaskStatus.FAILED,
                parts=(MessagePart.from_text(diagnostic),),
                transcript=diagnostic,
            )
            trace = ExecutionTrace(
                task_id=request.task_id,
                repo_id=repo_id,
                steps=[TraceStep(action="send task", tool_id=None, output_excerpt=diagnostic)],
                final_response=diagnostic,
                wall_time=time.monotonic() - started,
            )
            return result, trace

        result = TaskResult.from_dict(payload)
        raw_trace = payload.get("trace")
        if isinstance(raw_trace, dict):
            trace = ExecutionTrace.from_dict({**raw_trace, "repo_id": repo_id})
        else:
            # Agent did not stream structure: single opaque step from transcript.
            trace = ExecutionTrace(
                task_id=request.task_id,
                repo_id=repo_id,
                steps=[
                    TraceStep(action="send task", tool_id=None, output_excerpt=result.transcript[:400])
                ],
                final_response=result.transcript,
            )
        trace.task_id = request.task_id
        trace.repo_id = repo_id
        trace.wall_time = time.monotonic() - started
        if not trace.steps:
            trace.steps = [
                TraceStep(action="send task", tool_id=None, output_excerpt=result.transcript[:400])
            ]
        return result, trace
