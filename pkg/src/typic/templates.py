"""Slotted diagnostic-comment templates: pattern DSL, rendering, and set loading.

A pattern is plain text with ``{slot}`` placeholders, e.g.
``"It is unclear why {x} causes a bad result of {y}"``. Templates carry one
pattern per locale plus a quality dimension, and ship as a versioned set.
``NotApplicable`` is a selection label, not a template: it has no slots and
never renders.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Mapping, Union

from .errors import (
    DuplicateSlot,
    EmptySlotName,
    ExtraFiller,
    InvalidSlotName,
    InvariantViolation,
    MissingFiller,
    NoSlots,
    SchemaError,
    UnbalancedBraces,
    UnknownLocale,
)

NOT_APPLICABLE = "NotApplicable"

DIMENSIONS = frozenset({
    "LocalAcceptability",
    "LocalSufficiency",
    "LocalRelevance",
    "Clarity",
    "GlobalRelevance",
    "GlobalSufficiency",
})

TEMPLATE_ID_RE = re.compile(r"^[A-Z]{2,3}[0-9]$")
SLOT_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")

BUNDLED_TEMPLATE_FILE = "typic_templates.json"


@dataclass(frozen=True)
class Literal:
    text: str


@dataclass(frozen=True)
class Slot:
    name: str


Segment = Union[Literal, Slot]


@dataclass(frozen=True)
class TemplatePattern:
    """An ordered sequence of literal and slot segments."""

    segments: tuple[Segment, ...]

    @property
    def slot_names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.segments if isinstance(s, Slot))

    def unparse(self) -> str:
        """Reproduce the pattern source text byte for byte."""
        parts = []
        for seg in self.segments:
            if isinstance(seg, Slot):
                parts.append("{" + seg.name + "}")
            else:
                parts.append(seg.text)
        return "".join(parts)

    def render(self, fillers: Mapping[str, str]) -> str:
        parts = []
        for seg in self.segments:
            if isinstance(seg, Slot):
                parts.append(fillers[seg.name])
            else:
                parts.append(seg.text)
        return "".join(parts)


def parse_pattern(text: str) -> TemplatePattern:
    """Parse pattern text into segments.

    Braces delimit slots and cannot appear in literal text; patterns with no
    slots, empty or malformed slot names, or a slot used twice are rejected.
    """
    if not text:
        raise NoSlots("pattern text is empty")
    segments: list[Segment] = []
    seen: set[str] = set()
    buf: list[str] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "{":
            end = text.find("}", i + 1)
            if end == -1:
                raise UnbalancedBraces(f"unclosed '{{' at index {i}")
            name = text[i + 1 : end]
            if "{" in name:
                raise UnbalancedBraces(f"nested '{{' inside slot at index {i}")
            if not name.strip():
                raise EmptySlotName(f"empty slot name at index {i}")
            if not SLOT_NAME_RE.match(name):
                raise InvalidSlotName(f"invalid slot name {name!r} at index {i}")
            if name in seen:
                raise DuplicateSlot(f"slot {name!r} referenced twice")
            seen.add(name)
            if buf:
                segments.append(Literal("".join(buf)))
                buf = []
            segments.append(Slot(name))
            i = end + 1
        elif ch == "}":
            raise UnbalancedBraces(f"stray '}}' at index {i}")
        else:
            buf.append(ch)
            i += 1
    if buf:
        segments.append(Literal("".join(buf)))
    if not seen:
        raise NoSlots("pattern contains no slots")
    return TemplatePattern(tuple(segments))


@dataclass(frozen=True)
class Template:
    """A categorized diagnostic-comment pattern with per-locale surface forms."""

    id: str
    dimension: str
    slots: tuple[str, ...]
    surface_forms: Mapping[str, TemplatePattern] = field(hash=False)

    @property
    def locales(self) -> tuple[str, ...]:
        return tuple(self.surface_forms)

    def validate(self) -> None:
        if not TEMPLATE_ID_RE.match(self.id):
            raise InvariantViolation(self.id, "id does not match the category grammar")
        if self.dimension not in DIMENSIONS:
            raise InvariantViolation(self.id, f"unknown dimension {self.dimension!r}")
        if not 1 <= len(self.slots) <= 3:
            raise InvariantViolation(self.id, f"slot count {len(self.slots)} outside 1..3")
        if len(set(self.slots)) != len(self.slots):
            raise InvariantViolation(self.id, "duplicate slot names")
        if not self.surface_forms:
            raise InvariantViolation(self.id, "no surface forms")
        for locale, pattern in self.surface_forms.items():
            if set(pattern.slot_names) != set(self.slots):
                raise InvariantViolation(
                    self.id,
                    f"surface form {locale!r} uses slots {sorted(pattern.slot_names)}, "
                    f"declared {sorted(self.slots)}",
                )


def render(template: Template, locale: str, fillers: Mapping[str, str]) -> str:
    """Fill the template's slots and return the surface sentence."""
    if locale not in template.surface_forms:
        raise UnknownLocale(locale)
    slot_set = set(template.slots)
    for name in fillers:
        if name not in slot_set:
            raise ExtraFiller(name)
    for name in template.slots:
        if name not in fillers:
            raise MissingFiller(name)
    return template.surface_forms[locale].render(fillers)


@dataclass(frozen=True)
class TemplateSet:
    version: str
    templates: tuple[Template, ...]

    def __post_init__(self):
        ids = [t.id for t in self.templates]
        dupes = {i for i in ids if ids.count(i) > 1}
        if dupes:
            raise InvariantViolation(sorted(dupes)[0], "duplicate template id")

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(t.id for t in self.templates)

    def __len__(self) -> int:
        return len(self.templates)

    def __iter__(self):
        return iter(self.templates)

    def __getitem__(self, template_id: str) -> Template:
        for t in self.templates:
            if t.id == template_id:
                return t
        raise KeyError(template_id)

    def __contains__(self, template_id: str) -> bool:
        return any(t.id == template_id for t in self.templates)

    def selection_labels(self) -> tuple[str, ...]:
        """All labels an annotator may pick: template ids plus NotApplicable."""
        return self.ids + (NOT_APPLICABLE,)

    def label_index(self) -> dict[str, int]:
        """Template id to position, following the authored ordering."""
        return {t.id: i for i, t in enumerate(self.templates)}

    def to_document(self) -> dict:
        return {
            "version": self.version,
            "templates": [
                {
                    "id": t.id,
                    "dimension": t.dimension,
                    "slots": list(t.slots),
                    "surface_forms": {
                        loc: pat.unparse() for loc, pat in t.surface_forms.items()
                    },
                }
                for t in self.templates
            ],
        }


def load_template_set(document: dict) -> TemplateSet:
    """Build a validated TemplateSet from a parsed template-set document."""
    if not isinstance(document, dict):
        raise SchemaError("template-set document must be an object")
    version = document.get("version")
    if not isinstance(version, str) or not version:
        raise SchemaError("template-set document needs a non-empty 'version' string")
    raw_templates = document.get("templates")
    if not isinstance(raw_templates, list) or not raw_templates:
        raise SchemaError("template-set document needs a non-empty 'templates' list")
    templates = []
    for i, raw in enumerate(raw_templates):
        if not isinstance(raw, dict):
            raise SchemaError(f"templates[{i}] is not an object")
        missing = {"id", "dimension", "slots", "surface_forms"} - raw.keys()
        if missing:
            raise SchemaError(f"templates[{i}] is missing fields {sorted(missing)}")
        if not isinstance(raw["slots"], list) or not all(
            isinstance(s, str) for s in raw["slots"]
        ):
            raise SchemaError(f"templates[{i}].slots must be a list of strings")
        if not isinstance(raw["surface_forms"], dict) or not all(
            isinstance(v, str) for v in raw["surface_forms"].values()
        ):
            raise SchemaError(f"templates[{i}].surface_forms must map locale to text")
        surface = {}
        for locale, text in raw["surface_forms"].items():
            try:
                surface[locale] = parse_pattern(text)
            except Exception as exc:
                raise InvariantViolation(
                    str(raw["id"]), f"surface form {locale!r} does not parse: {exc}"
                ) from exc
        template = Template(
            id=str(raw["id"]),
            dimension=str(raw["dimension"]),
            slots=tuple(raw["slots"]),
            surface_forms=surface,
        )
        template.validate()
        templates.append(template)
    return TemplateSet(version=version, templates=tuple(templates))


def load_template_set_file(path) -> TemplateSet:
    with open(path, encoding="utf-8") as fh:
        try:
            document = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"template-set file is not valid JSON: {exc}") from exc
    return load_template_set(document)


def bundled_template_set() -> TemplateSet:
    """The template set shipped with the package (24 bilingual templates)."""
    text = resources.files("typic.data").joinpath(BUNDLED_TEMPLATE_FILE).read_text("utf-8")
    return load_template_set(json.loads(text))


def slot_arity_census(template_set: Iterable[Template]) -> dict[int, tuple[str, ...]]:
    """Template ids grouped by slot count."""
    census: dict[int, list[str]] = {}
    for t in template_set:
        census.setdefault(len(t.slots), []).append(t.id)
    return {k: tuple(v) for k, v in sorted(census.items())}
