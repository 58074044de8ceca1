"""Protocol layer: card parsing, strict/lenient validation, task messages."""

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from a2abench.protocol import (
    AgentCard,
    AgentSkill,
    CardDecodeError,
    InvalidPartError,
    MessagePart,
    PartKind,
    TaskRequest,
    TaskResult,
    TaskStatus,
    build_task_message,
    parse_agent_card,
    serialize_agent_card,
    validate_agent_card,
)


def make_valid_card(n_skills: int = 1) -> AgentCard:
    skills = [
        AgentSkill(
            id=f"s{i}",
            name=f"skill {i}",
            description=f"does useful thing number {i}",
            tags=["demo"],
        )
        for i in range(n_skills)
    ]
    return AgentCard(
        name="demo_agent",
        description="a demo agent",
        version="1.0.0",
        url="http://127.0.0.1:42000",
        capabilities={"streaming": False},
        default_input_modes=["text/plain"],
        default_output_modes=["text/plain"],
        skills=skills,
    )


class TestParseAgentCard:
    def test_spleeter_fixture_parses_with_empty_skills(self, spleeter_card_bytes):
        card = parse_agent_card(spleeter_card_bytes)
        assert card.name == "spleeter_audio_separation_agent"
        assert card.version == "1.0.0"
        assert card.capability("streaming") is False
        assert card.skills == []
        assert "audio/mpeg" in card.default_input_modes

    def test_empty_bytes_is_decode_error(self):
        with pytest.raises(CardDecodeError):
            parse_agent_card(b"")

    def test_malformed_json_is_decode_error(self):
        with pytest.raises(CardDecodeError):
            parse_agent_card(b"{not json")

    def test_non_object_top_level_is_decode_error(self):
        with pytest.raises(CardDecodeError):
            parse_agent_card(b"[1, 2]")

    def test_type_mismatch_reports_field_path(self):
        raw = json.dumps({"name": 42, "description": "x", "version": "1"})
        with pytest.raises(CardDecodeError) as exc:
            parse_agent_card(raw)
        assert exc.value.path == "name"

    def test_skill_type_mismatch_reports_nested_path(self):
        raw = json.dumps(
            {
                "name": "a",
                "description": "b",
                "version": "1",
                "skills": [{"id": "s1", "name": "n", "description": 7}],
            }
        )
        with pytest.raises(CardDecodeError) as exc:
            parse_agent_card(raw)
        assert exc.value.path == "skills[0].description"

    def test_capabilities_must_be_boolean(self):
        raw = json.dumps(
            {"name": "a", "description": "b", "version": "1", "capabilities": {"streaming": "no"}}
        )
        with pytest.raises(CardDecodeError) as exc:
            parse_agent_card(raw)
        assert exc.value.path == "capabilities.streaming"

    def test_tools_accepted_as_skills_alias(self):
        raw = json.dumps(
            {
                "name": "a",
                "description": "b",
                "version": "1",
                "tools": [{"id": "t1", "name": "ocr", "description": "extract text"}],
            }
        )
        card = parse_agent_card(raw)
        assert [s.id for s in card.skills] == ["t1"]
        assert "tools" not in card.extra

    def test_skills_win_over_tools_when_both_present(self):
        raw = json.dumps(
            {
                "name": "a",
                "description": "b",
                "version": "1",
                "skills": [{"id": "s1", "name": "n", "description": "d"}],
                "tools": [{"id": "t1", "name": "m", "description": "e"}],
            }
        )
        card = parse_agent_card(raw)
        assert [s.id for s in card.skills] == ["s1"]
        assert "tools" in card.extra

    def test_unknown_fields_preserved(self):
        raw = json.dumps(
            {
                "name": "a",
                "description": "b",
                "version": "1",
                "provider": {"organization": "acme"},
                "protocolVersion": "0.3.0",
            }
        )
        card = parse_agent_card(raw)
        assert card.extra["provider"] == {"organization": "acme"}
        reparsed = parse_agent_card(serialize_agent_card(card))
        assert reparsed == card


class TestRoundTrip:
    def test_single_skill_card_round_trips_byte_identically(self):
        # Oracle: serialize, re-parse, compare field by field, then re-serialize
        # and require identical bytes under canonical form.
        card = AgentCard(
            name="a",
            description="b",
            version="1",
            skills=[AgentSkill(id="s1", name="ocr", description="extract text")],
        )
        blob = serialize_agent_card(card)
        again = parse_agent_card(blob)
        assert again == card
        assert serialize_agent_card(again) == blob

    def test_spleeter_fixture_round_trips(self, spleeter_card_bytes):
        card = parse_agent_card(spleeter_card_bytes)
        assert parse_agent_card(serialize_agent_card(card)) == card

    @given(
        name=st.text(min_size=1, max_size=20),
        description=st.text(min_size=1, max_size=40),
        version=st.from_regex(r"[0-9]\.[0-9]\.[0-9]", fullmatch=True),
        n_skills=st.integers(min_value=0, max_value=4),
        streaming=st.booleans(),
        tags=st.lists(st.text(min_size=1, max_size=8), max_size=3),
    )
    @settings(max_examples=60, deadline=None)
    def test_round_trip_property(self, name, description, version, n_skills, streaming, tags):
        card = AgentCard(
            name=name,
            description=description,
            version=version,
            url="http://127.0.0.1:1",
            capabilities={"streaming": streaming},
            skills=[
                AgentSkill(id=f"s{i}", name=f"n{i}", description=f"d{i}", tags=list(tags))
                for i in range(n_skills)
            ],
        )
        assert parse_agent_card(serialize_agent_card(card)) == card


class TestValidateAgentCard:
    def test_spleeter_strict_fails_on_exactly_skills_non_empty(self, spleeter_card_bytes):
        card = parse_agent_card(spleeter_card_bytes)
        report = validate_agent_card(card, mode="strict")
        assert not report.valid
        assert report.rule_ids() == {"skills.non_empty"}

    def test_conformant_card_is_strictly_valid(self):
        report = validate_agent_card(make_valid_card(), mode="strict")
        assert report.valid
        assert report.failures == ()

    def test_one_empty_description_yields_exactly_that_failure_path(self):
        card = make_valid_card(2)
        card.skills[1] = AgentSkill(id="s1", name="ocr", description="")
        report = validate_agent_card(card, mode="strict")
        assert not report.valid
        assert report.failure_paths() == {"skills[1].description"}

    def test_every_failure_enumerated_not_just_first(self):
        card = AgentCard(name="", description="", version="", skills=[])
        report = validate_agent_card(card, mode="strict")
        assert report.rule_ids() == {
            "name.non_empty",
            "description.non_empty",
            "version.non_empty",
            "skills.non_empty",
        }

    def test_lenient_checks_only_name_version_url(self, spleeter_card_bytes):
        card = parse_agent_card(spleeter_card_bytes)
        report = validate_agent_card(card, mode="lenient")
        assert report.rule_ids() == {"url.present"}

    def test_valid_iff_failures_empty(self):
        for card in (make_valid_card(), AgentCard(name="", description="", version="")):
            report = validate_agent_card(card)
            assert report.valid == (len(report.failures) == 0)

    def test_strict_validation_monotone_in_skills(self):
        # Adding a well-formed skill never invalidates; dropping the last one always does.
        card = make_valid_card(1)
        assert validate_agent_card(card).valid
        card.skills.append(AgentSkill(id="s9", name="extra", description="more work"))
        assert validate_agent_card(card).valid
        stripped = make_valid_card(0)
        assert not validate_agent_card(stripped).valid

    def test_unknown_mode_rejected(self):
        with pytest.raises(ValueError):
            validate_agent_card(make_valid_card(), mode="casual")


class TestMessageParts:
    def test_text_part_shape(self):
        part = MessagePart.from_text("segment the dog")
        assert part.kind is PartKind.TEXT
        assert part.text == "segment the dog"
        assert part.file_path is None and part.mime_type is None

    def test_file_part_shape(self):
        part = MessagePart.from_file("/sandbox/dog.jpg", "image/jpeg")
        assert part.kind is PartKind.FILE
        assert part.text is None

    def test_exclusivity_not_constructible(self):
        with pytest.raises(InvalidPartError):
            MessagePart(kind=PartKind.TEXT, text="x", file_path="/f", mime_type="text/plain")
        with pytest.raises(InvalidPartError):
            MessagePart(kind=PartKind.FILE, text="x", file_path="/f", mime_type="text/plain")
        with pytest.raises(InvalidPartError):
            MessagePart(kind=PartKind.FILE)

    def test_part_dict_round_trip(self):
        for part in (
            MessagePart.from_text("hi"),
            MessagePart.from_file("/sandbox/a.txt", "text/plain"),
        ):
            assert MessagePart.from_dict(part.to_dict()) == part


class TestBuildTaskMessage:
    def test_single_text_part(self):
        req = build_task_message("t1", [MessagePart.from_text("segment the dog")])
        assert req.task_id == "t1"
        assert len(req.parts) == 1
        assert req.parts[0].kind is PartKind.TEXT

    def test_text_plus_file_keeps_order(self):
        req = build_task_message(
            "t2",
            [
                MessagePart.from_text("segment the dog with the given point"),
                MessagePart.from_file("/sandbox/dog.jpg", "image/jpeg"),
            ],
        )
        assert [p.kind for p in req.parts] == [PartKind.TEXT, PartKind.FILE]

    def test_empty_parts_rejected(self):
        with pytest.raises(InvalidPartError):
            build_task_message("t3", [])

    def test_non_part_entry_names_offending_index(self):
        with pytest.raises(InvalidPartError) as exc:
            build_task_message("t4", [MessagePart.from_text("ok"), "oops"])
        assert exc.value.index == 1

    def test_request_wire_round_trip(self):
        req = build_task_message(
            "t5",
            [
                MessagePart.from_text("count words"),
                MessagePart.from_file("/sandbox/in.txt", "text/plain"),
            ],
        )
        assert TaskRequest.from_dict(req.to_dict()) == req

    def test_result_wire_round_trip(self):
        res = TaskResult(
            task_id="t5",
            status=TaskStatus.COMPLETED,
            parts=(MessagePart.from_text("HELLO"),),
            transcript="[exit 0] HELLO",
        )
        assert TaskResult.from_dict(res.to_dict()) == res
