"""Workspace decomposition and repo registry loading."""

import json
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from a2abench.asset_model import (
    ClassificationRules,
    Domain,
    RegistryError,
    UnknownDomainError,
    UnreadableRootError,
    decompose_repository,
    load_repo_registry,
)


def build_tree(root: Path, files: dict[str, str]) -> None:
    for rel, content in files.items():
        path = root / rel
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(content, encoding="utf-8")


class TestDecompose:
    def test_exact_partition_of_hand_enumerated_tree(self, tmp_path):
        # Oracle: the tree is enumerated by hand; the partition must be exact.
        build_tree(
            tmp_path,
            {
                "pyproject.toml": "[project]\nname='x'\n",
                "settings.ini": "[app]\n",
                "core.py": "x = 1\n",
                "util.py": "y = 2\n",
                "sub/extra.py": "z = 3\n",
                "README.md": "# demo\n",
            },
        )
        ws = decompose_repository(tmp_path)
        assert [p.name for p in ws.dep_files] == ["pyproject.toml"]
        assert [p.name for p in ws.conf_files] == ["settings.ini"]
        assert sorted(p.name for p in ws.code_files) == ["core.py", "extra.py", "util.py"]
        assert ws.readme is not None and ws.readme.name == "README.md"
        assert ws.file_count() == 6

    def test_readme_only_repo(self, tmp_path):
        build_tree(tmp_path, {"README.md": "hello\n"})
        ws = decompose_repository(tmp_path)
        assert ws.code_files == []
        assert ws.dep_files == []
        assert ws.readme is not None

    def test_missing_root_is_unreadable(self, tmp_path):
        with pytest.raises(UnreadableRootError):
            decompose_repository(tmp_path / "nope")

    def test_empty_repository_is_warning_state_not_error(self, tmp_path):
        ws = decompose_repository(tmp_path)
        assert ws.file_count() == 0

    def test_ignore_rules_prune_vcs_and_caches(self, tmp_path):
        build_tree(
            tmp_path,
            {
                ".git/config": "x",
                "__pycache__/a.pyc": "x",
                ".venv/bin/python": "x",
                "main.py": "pass\n",
            },
        )
        ws = decompose_repository(tmp_path)
        assert [p.name for p in ws.code_files] == ["main.py"]
        assert ws.file_count() == 1

    def test_readme_priority_prefers_first_pattern_and_root(self, tmp_path):
        build_tree(
            tmp_path,
            {"docs/README.md": "inner", "README.md": "outer", "README.rst": "rst"},
        )
        ws = decompose_repository(tmp_path)
        assert ws.readme == tmp_path / "README.md"
        # The other readme-like files fall into the residual component.
        assert sorted(p.name for p in ws.code_files) == ["README.md", "README.rst"]

    def test_decomposition_deterministic(self, tmp_path):
        build_tree(
            tmp_path,
            {f"pkg/m{i}.py": "pass" for i in range(10)}
            | {"setup.py": "", "README": "r", "conf.yaml": "a: 1"},
        )
        a = decompose_repository(tmp_path)
        b = decompose_repository(tmp_path)
        assert a.dep_files == b.dep_files
        assert a.conf_files == b.conf_files
        assert a.code_files == b.code_files
        assert a.readme == b.readme

    @given(
        names=st.lists(
            st.sampled_from(
                [
                    "pyproject.toml",
                    "setup.py",
                    "requirements.txt",
                    "config.yaml",
                    "app.ini",
                    "README.md",
                    "README",
                    "main.py",
                    "lib.py",
                    "data.bin",
                    "notes.txt",
                    "pkg/mod.py",
                    "pkg/deep/x.py",
                    "docs/guide.md",
                ]
            ),
            min_size=0,
            max_size=10,
            unique=True,
        )
    )
    @settings(max_examples=40, deadline=None)
    def test_partition_property_over_generated_trees(self, tmp_path_factory, names):
        root = tmp_path_factory.mktemp("tree")
        build_tree(root, {n: "x" for n in names})
        ws = decompose_repository(root)
        assert ws.file_count() == len(names)
        # Disjointness: a path appears in exactly one component.
        all_paths = ws.dep_files + ws.conf_files + ws.code_files + ([ws.readme] if ws.readme else [])
        assert len(set(all_paths)) == len(all_paths)

    def test_rules_round_trip_as_data(self):
        rules = ClassificationRules.defaults()
        assert ClassificationRules.from_dict(rules.to_dict()) == rules


def write_registry(path: Path, entries) -> Path:
    path.write_text(json.dumps(entries), encoding="utf-8")
    return path


def skill(repo_id: str, n: int):
    return {
        "skill_id": f"{repo_id}_s{n}",
        "name": f"capability {n}",
        "description": f"does thing {n} for {repo_id}",
        "tags": ["demo"],
    }


class TestRegistry:
    def test_fixture_registry_loads(self, fixtures_dir):
        records = load_repo_registry(fixtures_dir / "registry.json")
        assert len(records) == 3
        assert all(len(r.ground_truth_skills) >= 1 for r in records)
        # Fixture repos ship with sources, so workspaces are decomposed.
        assert all(r.workspace.readme is not None for r in records)

    def test_reference_registry_counts(self, reference_dir):
        records = load_repo_registry(reference_dir / "registry.json")
        assert len(records) == 35
        assert sum(len(r.ground_truth_skills) for r in records) == 127
        assert {r.domain for r in records} == set(Domain)

    def test_empty_registry_gives_empty_list(self, tmp_path):
        path = write_registry(tmp_path / "r.json", [])
        assert load_repo_registry(path) == []

    def test_unknown_domain_rejected(self, tmp_path):
        path = write_registry(
            tmp_path / "r.json",
            [{"repo_id": "a", "domain": "astrology", "root": "a", "ground_truth_skills": [skill("a", 1)]}],
        )
        with pytest.raises(UnknownDomainError):
            load_repo_registry(path)

    def test_duplicate_repo_id_rejected(self, tmp_path):
        entry = {
            "repo_id": "a",
            "domain": "chemistry",
            "root": "a",
            "ground_truth_skills": [skill("a", 1)],
        }
        path = write_registry(tmp_path / "r.json", [entry, dict(entry)])
        with pytest.raises(RegistryError, match="duplicate"):
            load_repo_registry(path)

    def test_schema_error_carries_entry_index(self, tmp_path):
        path = write_registry(
            tmp_path / "r.json",
            [
                {"repo_id": "ok", "domain": "finance", "root": "x", "ground_truth_skills": [skill("ok", 1)]},
                {"repo_id": "bad", "domain": "finance", "root": "x", "ground_truth_skills": []},
            ],
        )
        with pytest.raises(RegistryError, match="entry 1"):
            load_repo_registry(path)

    def test_missing_root_yields_metadata_only_record(self, tmp_path):
        path = write_registry(
            tmp_path / "r.json",
            [{"repo_id": "ghostly", "domain": "finance", "root": "missing", "ground_truth_skills": [skill("g", 1)]}],
        )
        records = load_repo_registry(path)
        assert records[0].workspace.file_count() == 0
