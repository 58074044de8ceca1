"""Repository assets: workspace decomposition and the benchmark repo registry.

A repository is split into four components — dependency manifests,
configuration files, code, and one readme — driven by data-level pattern
rules rather than hard-coded heuristics. Files matching no rule fall into
the code component, which is the residual carrier of functionality. Test
directories are classified like any other code (default rules keep them).
"""

from __future__ import annotations

import fnmatch
import json
import logging
import os
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any

log = logging.getLogger(__name__)


class Domain(str, Enum):
    """The nine benchmark task domains."""

    DOCUMENT_WEB_PARSING = "document_web_parsing"
    WEB_SCRAPING = "web_scraping"
    SPEECH_AUDIO = "speech_audio"
    VISION_VIDEO = "vision_video"
    DEV_SECURITY = "dev_security"
    NLP_STRING = "nlp_string"
    CHEMISTRY = "chemistry"
    WEB_BACKEND = "web_backend"
    FINANCE = "finance"


class UnreadableRootError(OSError):
    """The repository root does not exist or is not a readable directory."""


class RegistryError(ValueError):
    """Registry file violates the registry schema."""


class UnknownDomainError(RegistryError):
    pass


@dataclass
class ClassificationRules:
    """Pattern lists (glob syntax) driving workspace decomposition.

    Patterns containing ``/`` match the file's repo-relative posix path,
    otherwise the basename. Priority: ignore, readme, dep, conf; unmatched
    files are code.
    """

    dep_patterns: list[str] = field(default_factory=list)
    conf_patterns: list[str] = field(default_factory=list)
    readme_patterns: list[str] = field(default_factory=list)
    ignore_patterns: list[str] = field(default_factory=list)

    @classmethod
    def defaults(cls) -> ClassificationRules:
        return cls(
            dep_patterns=[
                "pyproject.toml",
                "setup.py",
                "setup.cfg",
                "requirements*.txt",
                "requirements/*.txt",
                "Pipfile",
                "Pipfile.lock",
                "poetry.lock",
                "uv.lock",
                "environment.yml",
                "environment.yaml",
                "package.json",
                "package-lock.json",
                "yarn.lock",
                "Cargo.toml",
                "Cargo.lock",
                "go.mod",
                "go.sum",
                "Gemfile",
                "Gemfile.lock",
            ],
            conf_patterns=[
                "*.cfg",
                "*.ini",
                "*.toml",
                "*.yml",
                "*.yaml",
                "*.conf",
                "*.properties",
                ".env",
                ".env.*",
                ".flake8",
                ".editorconfig",
                "Makefile",
                "Dockerfile",
            ],
            readme_patterns=[
                "README.md",
                "README.rst",
                "README.txt",
                "README",
                "readme.md",
                "Readme.md",
            ],
            ignore_patterns=[
                ".git",
                ".hg",
                ".svn",
                "__pycache__",
                ".venv",
                "venv",
                "node_modules",
                ".mypy_cache",
                ".pytest_cache",
                ".tox",
                "dist",
                "build",
                "*.egg-info",
                "*.pyc",
                ".DS_Store",
            ],
        )

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ClassificationRules:
        return cls(
            dep_patterns=list(data.get("dep_patterns", [])),
            conf_patterns=list(data.get("conf_patterns", [])),
            readme_patterns=list(data.get("readme_patterns", [])),
            ignore_patterns=list(data.get("ignore_patterns", [])),
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "dep_patterns": list(self.dep_patterns),
            "conf_patterns": list(self.conf_patterns),
            "readme_patterns": list(self.readme_patterns),
            "ignore_patterns": list(self.ignore_patterns),
        }


@dataclass
class RepoWorkspace:
    """Four-component decomposition of a repository tree."""

    root: Path
    dep_files: list[Path] = field(default_factory=list)
    conf_files: list[Path] = field(default_factory=list)
    code_files: list[Path] = field(default_factory=list)
    readme: Path | None = None

    def file_count(self) -> int:
        return (
            len(self.dep_files)
            + len(self.conf_files)
            + len(self.code_files)
            + (1 if self.readme else 0)
        )

    def readme_text(self, limit: int = 4000) -> str:
        if self.readme is None:
            return ""
        try:
            return self.readme.read_text(encoding="utf-8", errors="replace")[:limit]
        except OSError:
            return ""


@dataclass
class GroundTruthSkill:
    """An expert-annotated capability a benchmark repo is known to provide."""

    repo_id: str
    skill_id: str
    name: str
    description: str
    tags: list[str] = field(default_factory=list)


@dataclass
class RepoRecord:
    repo_id: str
    domain: Domain
    workspace: RepoWorkspace
    ground_truth_skills: list[GroundTruthSkill] = field(default_factory=list)


def _matches(rel_posix: str, basename: str, pattern: str) -> bool:
    target = rel_posix if "/" in pattern else basename
    return fnmatch.fnmatch(target, pattern)


def _matches_any(rel_posix: str, basename: str, patterns: list[str]) -> bool:
    return any(_matches(rel_posix, basename, p) for p in patterns)


def decompose_repository(root: Path | str, rules: ClassificationRules | None = None) -> RepoWorkspace:
    """Partition every non-ignored regular file under ``root`` into exactly one component.

    Deterministic: the walk is sorted, so two runs over the same tree yield
    identical component lists. An empty repository is a warning, not an error.
    """
    root = Path(root)
    if rules is None:
        rules = ClassificationRules.defaults()
    if not root.is_dir() or not os.access(root, os.R_OK):
        raise UnreadableRootError(f"repository root is not a readable directory: {root}")

    files: list[Path] = []
    for dirpath, dirnames, filenames in os.walk(root):
        rel_dir = Path(dirpath).relative_to(root)
        dirnames[:] = sorted(
            d
            for d in dirnames
            if not _matches_any((rel_dir / d).as_posix(), d, rules.ignore_patterns)
        )
        for name in sorted(filenames):
            rel = (rel_dir / name).as_posix().removeprefix("./")
            if _matches_any(rel, name, rules.ignore_patterns):
                continue
            files.append(root / rel)

    if not files:
        log.warning("repository %s contains no files after ignore rules", root)

    # Readme: first pattern in priority order that has a match; root-most,
    # lexicographically-first candidate wins.
    readme: Path | None = None
    for pattern in rules.readme_patterns:
        candidates = [
            f
            for f in files
            if _matches(f.relative_to(root).as_posix(), f.name, pattern)
        ]
        if candidates:
            readme = min(candidates, key=lambda f: (len(f.relative_to(root).parts), str(f)))
            break

    workspace = RepoWorkspace(root=root)
    workspace.readme = readme
    for f in files:
        if f == readme:
            continue
        rel = f.relative_to(root).as_posix()
        if _matches_any(rel, f.name, rules.dep_patterns):
            workspace.dep_files.append(f)
        elif _matches_any(rel, f.name, rules.conf_patterns):
            workspace.conf_files.append(f)
        else:
            workspace.code_files.append(f)
    return workspace


def _parse_skill_entry(entry: Any, repo_id: str, index: int, skill_index: int) -> GroundTruthSkill:
    if not isinstance(entry, dict):
        raise RegistryError(f"entry {index}: skill {skill_index} must be an object")
    for key in ("skill_id", "name", "description"):
        if not isinstance(entry.get(key), str) or not entry[key]:
            raise RegistryError(
                f"entry {index}: skill {skill_index} needs a non-empty '{key}'"
            )
    tags = entry.get("tags", [])
    if not isinstance(tags, list):
        raise RegistryError(f"entry {index}: skill {skill_index} tags must be a list")
    return GroundTruthSkill(
        repo_id=repo_id,
        skill_id=entry["skill_id"],
        name=entry["name"],
        description=entry["description"],
        tags=[str(t) for t in tags],
    )


def load_repo_registry(
    path: Path | str,
    rules: ClassificationRules | None = None,
) -> list[RepoRecord]:
    """Load a registry file into validated records.

    Entries whose ``root`` directory exists are decomposed on the spot;
    metadata-only entries (missing roots) get an empty workspace. Relative
    roots resolve against the registry file's directory.
    """
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise RegistryError(f"cannot read registry {path}: {exc}") from exc
    if not isinstance(data, list):
        raise RegistryError("registry must be a JSON array")

    records: list[RepoRecord] = []
    seen_ids: set[str] = set()
    total_skills = 0
    for i, entry in enumerate(data):
        if not isinstance(entry, dict):
            raise RegistryError(f"entry {i}: must be an object")
        repo_id = entry.get("repo_id")
        if not isinstance(repo_id, str) or not repo_id:
            raise RegistryError(f"entry {i}: needs a non-empty 'repo_id'")
        if repo_id in seen_ids:
            raise RegistryError(f"entry {i}: duplicate repo_id '{repo_id}'")
        seen_ids.add(repo_id)

        raw_domain = entry.get("domain")
        try:
            domain = Domain(raw_domain)
        except ValueError:
            raise UnknownDomainError(
                f"entry {i}: unknown domain '{raw_domain}' for repo '{repo_id}'"
            ) from None

        raw_skills = entry.get("ground_truth_skills", [])
        if not isinstance(raw_skills, list) or not raw_skills:
            raise RegistryError(f"entry {i}: repo '{repo_id}' needs at least one ground-truth skill")
        skills = [_parse_skill_entry(s, repo_id, i, j) for j, s in enumerate(raw_skills)]
        skill_ids = [s.skill_id for s in skills]
        if len(set(skill_ids)) != len(skill_ids):
            raise RegistryError(f"entry {i}: repo '{repo_id}' has duplicate skill_id")
        total_skills += len(skills)

        raw_root = entry.get("root", "")
        root = Path(raw_root)
        if not root.is_absolute():
            root = path.parent / root
        if root.is_dir():
            workspace = decompose_repository(root, rules)
        else:
            workspace = RepoWorkspace(root=root)

        records.append(
            RepoRecord(
                repo_id=repo_id,
                domain=domain,
                workspace=workspace,
                ground_truth_skills=skills,
            )
        )

    log.info("loaded %d repos with %d ground-truth skills from %s", len(records), total_skills, path)
    return records
