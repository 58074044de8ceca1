"""Isolated per-attempt working copies of a repository."""

from __future__ import annotations

import os
import shlex
import shutil
import subprocess
import sys
from dataclasses import dataclass
from pathlib import Path


@dataclass
class CommandResult:
    command: str
    exit_code: int
    stdout: str
    stderr: str

    @property
    def ok(self) -> bool:
        return self.exit_code == 0


class Sandbox:
    """A private directory copy in which setup commands and tools run."""

    def __init__(self, root: Path):
        self.root = Path(root)

    @classmethod
    def create(cls, source: Path | str, dest: Path | str) -> "Sandbox":
        """Copy ``source`` into ``dest`` (replacing it) and wrap the copy."""
        source, dest = Path(source), Path(dest)
        if dest.exists():
            shutil.rmtree(dest)
        dest.parent.mkdir(parents=True, exist_ok=True)
        shutil.copytree(source, dest)
        return cls(dest)

    def interpreter(self) -> str:
        """The sandbox venv interpreter when present, else the running one."""
        venv_python = self.root / ".venv" / "bin" / "python"
        if venv_python.exists():
            return str(venv_python)
        return sys.executable

    def render(self, template: str, **values: str) -> str:
        """Substitute ``{python}``/``{repo}`` plus caller placeholders, quoting values."""
        mapping = {"python": self.interpreter(), "repo": str(self.root)}
        mapping.update(values)
        rendered = template
        for key, value in mapping.items():
            rendered = rendered.replace("{" + key + "}", shlex.quote(str(value)))
        return rendered

    def run(
        self,
        command: str,
        env: dict[str, str] | None = None,
        timeout: float = 120.0,
    ) -> CommandResult:
        """Run a rendered command inside the sandbox, capturing output."""
        argv = shlex.split(command)
        try:
            proc = subprocess.run(
                argv,
                cwd=self.root,
                env=None if env is None else {**os.environ, **env},
                capture_output=True,
                text=True,
                timeout=timeout,
            )
            return CommandResult(command, proc.returncode, proc.stdout, proc.stderr)
        except FileNotFoundError as exc:
            return CommandResult(command, 127, "", str(exc))
        except subprocess.TimeoutExpired as exc:
            return CommandResult(command, 124, exc.stdout or "", f"timeout after {timeout}s")

    def write_file(self, rel_path: str, content: str) -> Path:
        path = self.root / rel_path
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(content, encoding="utf-8")
        return path
