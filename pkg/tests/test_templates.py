import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from typic import errors
from typic.templates import (
    NOT_APPLICABLE,
    Slot,
    TemplatePattern,
    load_template_set,
    parse_pattern,
    render,
    slot_arity_census,
)

EXPECTED_IDS = (
    "CA1", "CA2", "CA3", "CA4", "VAL1", "VAL2", "VAL3", "VAL4", "CLS1", "CLS2",
    "PR1", "EX1", "EX2", "EX3", "CMP1", "CMP2", "LR1", "CLR1", "CLR2",
    "GR1", "GR2", "GR3", "GS1", "GS2",
)


class TestParsePattern:
    def test_basic_two_slot(self):
        pattern = parse_pattern("It is unclear why {x} causes a bad result of {y}")
        assert pattern.slot_names == ("x", "y")
        assert pattern.unparse() == "It is unclear why {x} causes a bad result of {y}"

    def test_no_slots_rejected(self):
        with pytest.raises(errors.NoSlots):
            parse_pattern("plain text without slots")

    def test_duplicate_slot_rejected(self):
        with pytest.raises(errors.DuplicateSlot):
            parse_pattern("why {x} and {x}")

    def test_unbalanced(self):
        with pytest.raises(errors.UnbalancedBraces):
            parse_pattern("{x} and {y")
        with pytest.raises(errors.UnbalancedBraces):
            parse_pattern("oops } here {x}")
        with pytest.raises(errors.UnbalancedBraces):
            parse_pattern("{a{b}}")

    def test_empty_and_invalid_names(self):
        with pytest.raises(errors.EmptySlotName):
            parse_pattern("{} trailing {x}")
        with pytest.raises(errors.EmptySlotName):
            parse_pattern("{  } trailing {x}")
        with pytest.raises(errors.InvalidSlotName):
            parse_pattern("{a b} and {x}")

    def test_empty_text(self):
        with pytest.raises(errors.NoSlots):
            parse_pattern("")

    def test_adjacent_slots(self):
        pattern = parse_pattern("{x}{y}")
        assert pattern.slot_names == ("x", "y")
        assert pattern.unparse() == "{x}{y}"


LITERAL_ALPHABET = st.text(
    alphabet=st.characters(blacklist_characters="{}", blacklist_categories=("Cs",)),
    min_size=1,
    max_size=12,
)


@st.composite
def pattern_texts(draw):
    n_slots = draw(st.integers(min_value=1, max_value=3))
    names = draw(
        st.lists(
            st.from_regex(r"[a-z_][a-z0-9_]{0,5}", fullmatch=True),
            min_size=n_slots,
            max_size=n_slots,
            unique=True,
        )
    )
    parts = []
    for name in names:
        if draw(st.booleans()):
            parts.append(draw(LITERAL_ALPHABET))
        parts.append("{" + name + "}")
    if draw(st.booleans()):
        parts.append(draw(LITERAL_ALPHABET))
    return "".join(parts)


@given(pattern_texts())
@settings(max_examples=300)
def test_parse_round_trip(text):
    assert parse_pattern(text).unparse() == text


class TestRender:
    def test_paper_example(self, template_set):
        out = render(
            template_set["CA2"],
            "en",
            {"x": "abolishing homework", "y": "students becoming passive in character"},
        )
        assert out == (
            "It is unclear why abolishing homework causes a bad result of "
            "students becoming passive in character"
        )

    def test_identity_filler(self, template_set):
        out = render(template_set["EX1"], "en", {"x": "x"})
        assert out == "It lacks the specificity of what exactly is an example of x"

    def test_missing_filler(self, template_set):
        with pytest.raises(errors.MissingFiller) as exc:
            render(template_set["CA2"], "en", {"x": "a"})
        assert exc.value.slot == "y"

    def test_extra_filler(self, template_set):
        with pytest.raises(errors.ExtraFiller):
            render(template_set["EX1"], "en", {"x": "a", "q": "b"})

    def test_unknown_locale(self, template_set):
        with pytest.raises(errors.UnknownLocale):
            render(template_set["CA2"], "fr", {"x": "a", "y": "b"})

    def test_japanese_form(self, template_set):
        out = render(template_set["CA2"], "ja", {"x": "宿題廃止", "y": "受動的になる"})
        assert out == "なぜ 宿題廃止 によって 受動的になる という悪い結果が起こるのかが不明確"


class TestBundledSet:
    def test_exactly_24_templates(self, template_set):
        assert len(template_set) == 24
        assert template_set.ids == EXPECTED_IDS

    def test_slot_arity_census(self, template_set):
        census = slot_arity_census(template_set)
        assert set(census[3]) == {"CLS2", "CMP2"}
        assert len(census[1]) + len(census[2]) == 22

    def test_bilingual(self, template_set):
        for template in template_set:
            assert set(template.locales) == {"ja", "en"}

    def test_render_totality(self, template_set):
        rng = random.Random(0)
        fillers_bank = ["alpha", "beta studies", "gamma delta epsilon"]
        for template in template_set:
            for locale in template.locales:
                fillers = {slot: rng.choice(fillers_bank) for slot in template.slots}
                out = render(template, locale, fillers)
                for text in fillers.values():
                    assert text in out

    def test_not_applicable_is_not_a_template(self, template_set):
        assert NOT_APPLICABLE not in template_set
        assert template_set.selection_labels()[-1] == NOT_APPLICABLE
        assert len(template_set.selection_labels()) == 25

    def test_document_round_trip(self, template_set):
        doc = template_set.to_document()
        again = load_template_set(json.loads(json.dumps(doc)))
        assert again == template_set


class TestLoadTemplateSet:
    def _doc(self, **overrides):
        doc = {
            "version": "t",
            "templates": [
                {
                    "id": "CA1",
                    "dimension": "LocalAcceptability",
                    "slots": ["x"],
                    "surface_forms": {"en": "why {x}"},
                }
            ],
        }
        doc.update(overrides)
        return doc

    def test_duplicate_ids_rejected(self):
        doc = self._doc()
        doc["templates"] = doc["templates"] * 2
        with pytest.raises(errors.InvariantViolation):
            load_template_set(doc)

    def test_slot_set_mismatch_rejected(self):
        doc = self._doc()
        doc["templates"][0]["slots"] = ["x", "y"]
        with pytest.raises(errors.InvariantViolation):
            load_template_set(doc)

    def test_bad_id_rejected(self):
        doc = self._doc()
        doc["templates"][0]["id"] = "lowercase1"
        with pytest.raises(errors.InvariantViolation):
            load_template_set(doc)

    def test_bad_dimension_rejected(self):
        doc = self._doc()
        doc["templates"][0]["dimension"] = "Vibes"
        with pytest.raises(errors.InvariantViolation):
            load_template_set(doc)

    def test_missing_fields(self):
        with pytest.raises(errors.SchemaError):
            load_template_set({"version": "t", "templates": [{"id": "CA1"}]})
        with pytest.raises(errors.SchemaError):
            load_template_set({"templates": []})

    def test_four_slots_rejected(self):
        doc = self._doc()
        doc["templates"][0]["slots"] = ["a", "b", "c", "d"]
        doc["templates"][0]["surface_forms"] = {"en": "{a}{b}{c}{d}"}
        with pytest.raises(errors.InvariantViolation):
            load_template_set(doc)


def test_pattern_segments_are_frozen():
    pattern = TemplatePattern((Slot("x"),))
    with pytest.raises(AttributeError):
        pattern.segments = ()
