"""Benchmark task suites: schemas, complexity tiers, and suite statistics.

Single-repo tasks carry four binary complexity indicators (annotated at
generation time, never inferred at load time); multi-repo tasks are strictly
linear chains whose tier comes from chain length. The loader validates every
repository reference against the registry and resolves file-part paths
against the suite directory.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any

from .asset_model import Domain, RepoRecord
from .protocol import MessagePart, PartKind


class Tier(str, Enum):
    EASY = "easy"
    MEDIUM = "medium"
    HARD = "hard"


class SuiteError(ValueError):
    """Task file violates the suite schema."""


class DanglingRepoError(SuiteError):
    pass


class MissingAssetError(SuiteError):
    pass


class ChainTooShortError(ValueError):
    pass


@dataclass(frozen=True)
class ComplexityIndicators:
    """Four binary difficulty markers; all always present."""

    d1_constrained_env: bool
    d2_uncertain_output: bool
    d3_nonstandard_processing: bool
    d4_domain_expertise: bool

    def count(self) -> int:
        return sum(
            (
                self.d1_constrained_env,
                self.d2_uncertain_output,
                self.d3_nonstandard_processing,
                self.d4_domain_expertise,
            )
        )

    def to_dict(self) -> dict[str, bool]:
        return {
            "d1_constrained_env": self.d1_constrained_env,
            "d2_uncertain_output": self.d2_uncertain_output,
            "d3_nonstandard_processing": self.d3_nonstandard_processing,
            "d4_domain_expertise": self.d4_domain_expertise,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ComplexityIndicators:
        missing = {k for k in cls.__dataclass_fields__ if k not in data}
        if missing:
            raise SuiteError(f"indicators missing {sorted(missing)}")
        return cls(
            d1_constrained_env=bool(data["d1_constrained_env"]),
            d2_uncertain_output=bool(data["d2_uncertain_output"]),
            d3_nonstandard_processing=bool(data["d3_nonstandard_processing"]),
            d4_domain_expertise=bool(data["d4_domain_expertise"]),
        )


@dataclass
class GroundTruthSpec:
    """Oracle data a judge compares an execution against."""

    oracle_steps: list[str]
    expected_artifact: str
    success_criteria: list[str]


@dataclass
class SingleRepoTask:
    task_id: str
    repo_id: str
    task_description: str
    fuzzy_description: str
    input_parts: list[MessagePart]
    indicators: ComplexityIndicators
    expected: GroundTruthSpec


@dataclass
class SubtaskSpec:
    step: int
    required_repo_id: str
    action: str
    expected_output: str


@dataclass
class MultiRepoTask:
    task_id: str
    goal: str
    chain: list[SubtaskSpec]
    verification: list[str]
    allow_repeated_repos: bool = False
    initial_input: MessagePart | None = None

    def chain_length(self) -> int:
        return len(self.chain)


@dataclass
class TaskSuite:
    single: list[SingleRepoTask]
    multi: list[MultiRepoTask]
    registry: list[RepoRecord]

    def repo(self, repo_id: str) -> RepoRecord:
        for record in self.registry:
            if record.repo_id == repo_id:
                return record
        raise KeyError(repo_id)


@dataclass
class SuiteStats:
    single_count: int
    multi_count: int
    per_domain_counts: dict[Domain, int]
    per_tier_counts: dict[tuple[str, Tier], int]
    cross_domain_counts: dict[int, int]

    def domain_percentage(self, domain: Domain) -> float:
        if not self.single_count:
            return 0.0
        return 100.0 * self.per_domain_counts.get(domain, 0) / self.single_count


def classify_single_task(indicators: ComplexityIndicators) -> Tier:
    """Easy for 0-1 satisfied indicators, medium for 2, hard for 3+."""
    count = indicators.count()
    if count <= 1:
        return Tier.EASY
    if count == 2:
        return Tier.MEDIUM
    return Tier.HARD


def classify_multi_task(chain_length: int) -> Tier:
    """Easy for chains of 2-3 repositories, medium for 4-5, hard for 6+."""
    if chain_length < 2:
        raise ChainTooShortError(f"multi-repo chains need at least 2 steps, got {chain_length}")
    if chain_length <= 3:
        return Tier.EASY
    if chain_length <= 5:
        return Tier.MEDIUM
    return Tier.HARD


def _parse_input_parts(raw: Any, where: str, suite_dir: Path) -> list[MessagePart]:
    if not isinstance(raw, list) or not raw:
        raise SuiteError(f"{where}: input_parts must be a non-empty list")
    parts: list[MessagePart] = []
    for j, item in enumerate(raw):
        if not isinstance(item, dict):
            raise SuiteError(f"{where}: input_parts[{j}] must be an object")
        try:
            part = MessagePart.from_dict(item)
        except ValueError as exc:
            raise SuiteError(f"{where}: input_parts[{j}]: {exc}") from exc
        if part.kind is PartKind.FILE:
            path = Path(part.file_path)
            if not path.is_absolute():
                path = suite_dir / path
            if not path.is_file():
                raise MissingAssetError(f"{where}: asset file not found: {path}")
            part = MessagePart.from_file(str(path), part.mime_type)
        parts.append(part)
    if parts[0].kind is not PartKind.TEXT:
        raise SuiteError(f"{where}: input_parts[0] must be a text part")
    return parts


def _parse_single_task(entry: Any, index: int, suite_dir: Path) -> SingleRepoTask:
    where = f"single task {index}"
    if not isinstance(entry, dict):
        raise SuiteError(f"{where}: must be an object")
    task_id = entry.get("task_id")
    if not isinstance(task_id, str):
        raise SuiteError(f"{where}: needs a string task_id")
    stem, sep, suffix = task_id.rpartition("_task_")
    if not sep or not stem or not suffix.isdigit():
        raise SuiteError(f"{where}: task_id '{task_id}' must look like '<repo>_task_<n>'")
    repo_id = entry.get("repo_id", stem)
    if repo_id != stem:
        raise SuiteError(f"{where}: task_id prefix '{stem}' disagrees with repo_id '{repo_id}'")

    expected_raw = entry.get("expected")
    if not isinstance(expected_raw, dict):
        raise SuiteError(f"{where}: needs an 'expected' block")
    expected = GroundTruthSpec(
        oracle_steps=[str(s) for s in expected_raw.get("oracle_steps", [])],
        expected_artifact=str(expected_raw.get("expected_artifact", "")),
        success_criteria=[str(s) for s in expected_raw.get("success_criteria", [])],
    )
    indicators_raw = entry.get("indicators")
    if not isinstance(indicators_raw, dict):
        raise SuiteError(f"{where}: needs an 'indicators' block")

    return SingleRepoTask(
        task_id=task_id,
        repo_id=repo_id,
        task_description=str(entry.get("task_description", "")),
        fuzzy_description=str(entry.get("fuzzy_description", "")),
        input_parts=_parse_input_parts(entry.get("input_parts"), where, suite_dir),
        indicators=ComplexityIndicators.from_dict(indicators_raw),
        expected=expected,
    )


def _parse_multi_task(entry: Any, index: int, suite_dir: Path) -> MultiRepoTask:
    where = f"multi task {index}"
    if not isinstance(entry, dict):
        raise SuiteError(f"{where}: must be an object")
    task_id = entry.get("task_id")
    if not isinstance(task_id, str) or not task_id:
        raise SuiteError(f"{where}: needs a task_id")
    steps_raw = entry.get("steps")
    if not isinstance(steps_raw, list) or len(steps_raw) < 2:
        raise SuiteError(f"{where}: needs a steps array of length >= 2")

    chain: list[SubtaskSpec] = []
    for j, step in enumerate(steps_raw):
        if not isinstance(step, dict):
            raise SuiteError(f"{where}: steps[{j}] must be an object")
        if step.get("step") != j + 1:
            raise SuiteError(f"{where}: steps[{j}] index must be {j + 1} (strictly linear chain)")
        repo_id = step.get("required_repo_id")
        if not isinstance(repo_id, str) or not repo_id:
            raise SuiteError(f"{where}: steps[{j}] needs required_repo_id")
        chain.append(
            SubtaskSpec(
                step=j + 1,
                required_repo_id=repo_id,
                action=str(step.get("action", "")),
                expected_output=str(step.get("expected_output", "")),
            )
        )

    allow_repeats = bool(entry.get("allow_repeated_repos", False))
    repo_ids = [s.required_repo_id for s in chain]
    if not allow_repeats and len(set(repo_ids)) != len(repo_ids):
        raise SuiteError(f"{where}: repeated repo without allow_repeated_repos flag")

    initial: MessagePart | None = None
    raw_initial = entry.get("initial_input")
    if raw_initial is not None:
        if not isinstance(raw_initial, dict) or "path" not in raw_initial:
            raise SuiteError(f"{where}: initial_input needs 'path' and 'mime_type'")
        path = Path(str(raw_initial["path"]))
        if not path.is_absolute():
            path = suite_dir / path
        if not path.is_file():
            raise MissingAssetError(f"{where}: initial input not found: {path}")
        initial = MessagePart.from_file(str(path), str(raw_initial.get("mime_type", "text/plain")))

    return MultiRepoTask(
        task_id=task_id,
        goal=str(entry.get("goal", "")),
        chain=chain,
        verification=[str(v) for v in entry.get("verification", [])],
        allow_repeated_repos=allow_repeats,
        initial_input=initial,
    )


def load_task_suite(
    single_path: Path | str,
    multi_path: Path | str,
    registry: list[RepoRecord],
) -> TaskSuite:
    """Load and validate both task files against a repo registry.

    Dangling repository references are hard errors; file parts must point at
    existing asset files (relative paths resolve against the task file's
    directory).
    """
    single_path, multi_path = Path(single_path), Path(multi_path)
    known = {r.repo_id for r in registry}

    def read_array(path: Path) -> list[Any]:
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise SuiteError(f"cannot read {path}: {exc}") from exc
        if not isinstance(data, list):
            raise SuiteError(f"{path}: expected a JSON array")
        return data

    single: list[SingleRepoTask] = []
    for i, entry in enumerate(read_array(single_path)):
        task = _parse_single_task(entry, i, single_path.parent)
        if task.repo_id not in known:
            raise DanglingRepoError(f"single task {i}: unknown repo '{task.repo_id}'")
        single.append(task)

    multi: list[MultiRepoTask] = []
    for i, entry in enumerate(read_array(multi_path)):
        task = _parse_multi_task(entry, i, multi_path.parent)
        for sub in task.chain:
            if sub.required_repo_id not in known:
                raise DanglingRepoError(
                    f"multi task {i}: step {sub.step} references unknown repo '{sub.required_repo_id}'"
                )
        multi.append(task)

    seen_ids = [t.task_id for t in single] + [t.task_id for t in multi]
    if len(set(seen_ids)) != len(seen_ids):
        raise SuiteError("duplicate task_id across suite")

    return TaskSuite(single=single, multi=multi, registry=registry)


def suite_statistics(suite: TaskSuite) -> SuiteStats:
    """Aggregate counts: per domain, per (split, tier), and cross-domain k."""
    domain_of = {r.repo_id: r.domain for r in suite.registry}

    per_domain: dict[Domain, int] = {}
    per_tier: dict[tuple[str, Tier], int] = {}
    for task in suite.single:
        domain = domain_of[task.repo_id]
        per_domain[domain] = per_domain.get(domain, 0) + 1
        tier = classify_single_task(task.indicators)
        per_tier[("single", tier)] = per_tier.get(("single", tier), 0) + 1

    cross: dict[int, int] = {}
    for task in suite.multi:
        tier = classify_multi_task(task.chain_length())
        per_tier[("multi", tier)] = per_tier.get(("multi", tier), 0) + 1
        k = len({domain_of[s.required_repo_id] for s in task.chain})
        cross[k] = cross.get(k, 0) + 1

    return SuiteStats(
        single_count=len(suite.single),
        multi_count=len(suite.multi),
        per_domain_counts=per_domain,
        per_tier_counts=per_tier,
        cross_domain_counts=cross,
    )
