"""Screen-reader core: form model, key navigation, tone announcements.

Announcements are tone sequences, not speech: a field-kind earcon followed
by one tone per character of the lowercase label, each tone trailed by a
short gap. The planner is isolated so a speech synthesizer could replace
it without touching navigation or the audio path.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping

from . import driver
from .audio import BEEP_BASE_HZ
from .errors import BeepReaderError
from .verbs import SET_BEEP_CONTROL, VerbCommand, VerbId

SELECTION = "selection"
TOGGLE = "toggle"
NUMERIC = "numeric"
ACTION = "action"
FIELD_KINDS = (SELECTION, TOGGLE, NUMERIC, ACTION)

FOCUS_CHANGED = "FocusChanged"
VALUE_CHANGED = "ValueChanged"
ACTIVATED = "Activated"

KEYS = ("Tab", "ShiftTab", "Up", "Down", "Left", "Right", "Enter")

MIN_TONE_HZ = 47  # lowest frequency a divider in 1..255 can realize
MAX_TONE_HZ = BEEP_BASE_HZ


class FormError(BeepReaderError):
    """A form document is malformed; the message names the offending key."""


@dataclass
class Field:
    id: str
    label: str
    kind: str
    options: list[str] | None = None
    minimum: int | None = None
    maximum: int | None = None
    step: int = 1
    value: object = None

    def __post_init__(self) -> None:
        if self.kind not in FIELD_KINDS:
            raise FormError(f"field {self.id!r}: unknown kind {self.kind!r}")
        if self.kind == SELECTION:
            if not self.options:
                raise FormError(f"field {self.id!r}: selection needs options")
            if self.value is None:
                self.value = self.options[0]
            if self.value not in self.options:
                raise FormError(f"field {self.id!r}: value {self.value!r} not an option")
        elif self.kind == TOGGLE:
            if self.value is None:
                self.value = False
            if not isinstance(self.value, bool):
                raise FormError(f"field {self.id!r}: toggle value must be on/off")
        elif self.kind == NUMERIC:
            if self.minimum is None or self.maximum is None:
                raise FormError(f"field {self.id!r}: numeric needs a range")
            if self.step < 1 or self.maximum < self.minimum:
                raise FormError(f"field {self.id!r}: bad numeric range")
            if self.value is None:
                self.value = self.minimum
            if (
                not isinstance(self.value, int)
                or not self.minimum <= self.value <= self.maximum
                or (self.value - self.minimum) % self.step
            ):
                raise FormError(f"field {self.id!r}: value {self.value!r} off the range")
        elif self.value is not None:
            raise FormError(f"field {self.id!r}: action fields carry no value")

    def value_text(self) -> str:
        if self.kind == TOGGLE:
            return "on" if self.value else "off"
        if self.kind == ACTION:
            return "button"  # announce the role, the way screen readers do
        return str(self.value)

    def cycle(self, delta: int) -> bool:
        """Advance the value by delta positions with wraparound."""
        if self.kind == SELECTION:
            index = self.options.index(self.value)
            self.value = self.options[(index + delta) % len(self.options)]
            return True
        if self.kind == TOGGLE:
            self.value = not self.value
            return True
        if self.kind == NUMERIC:
            count = (self.maximum - self.minimum) // self.step + 1
            index = (self.value - self.minimum) // self.step
            self.value = self.minimum + ((index + delta) % count) * self.step
            return True
        return False


@dataclass
class Form:
    title: str
    fields: list[Field]
    focus_index: int = 0

    def __post_init__(self) -> None:
        if self.fields and not 0 <= self.focus_index < len(self.fields):
            raise FormError(f"focus_index {self.focus_index} out of range")
        seen = set()
        for f in self.fields:
            if f.id in seen:
                raise FormError(f"duplicate field id {f.id!r}")
            seen.add(f.id)

    @property
    def focused(self) -> Field:
        return self.fields[self.focus_index]

    def field(self, field_id: str) -> Field:
        for f in self.fields:
            if f.id == field_id:
                return f
        raise KeyError(field_id)


@dataclass(frozen=True)
class UiEvent:
    kind: str  # FocusChanged | ValueChanged | Activated
    field_id: str
    transcript: str

    def __post_init__(self) -> None:
        if not self.transcript:
            raise ValueError("event transcript must be non-empty")


def handle_key(form: Form, key: str) -> tuple[Form, list[UiEvent]]:
    """Apply one key; unknown keys are ignored and yield no events."""
    if not form.fields:
        raise ValueError("form has no fields")
    events: list[UiEvent] = []
    if key in ("Tab", "Down", "ShiftTab", "Up"):
        delta = 1 if key in ("Tab", "Down") else -1
        form.focus_index = (form.focus_index + delta) % len(form.fields)
        f = form.focused
        events.append(UiEvent(FOCUS_CHANGED, f.id, f"{f.label}: {f.value_text()}"))
    elif key in ("Left", "Right"):
        f = form.focused
        if f.cycle(1 if key == "Right" else -1):
            events.append(UiEvent(VALUE_CHANGED, f.id, f"{f.label}: {f.value_text()}"))
    elif key == "Enter":
        f = form.focused
        if f.kind == ACTION:
            events.append(UiEvent(ACTIVATED, f.id, f"{f.label} activated"))
    return form, events


@dataclass(frozen=True)
class PlannerConfig:
    """Tone-code tables; all overridable when constructing a session."""

    earcon_hz: Mapping[str, float] = field(
        default_factory=lambda: {SELECTION: 880, TOGGLE: 660, NUMERIC: 550, ACTION: 440}
    )
    earcon_ms: float = 120
    letter_ms: float = 60
    gap_ms: float = 20
    letter_base_hz: float = 300  # 'a'; each later letter adds letter_step_hz
    letter_step_hz: float = 25
    other_hz: float = 200  # any non a-z character


DEFAULT_PLANNER = PlannerConfig()


@dataclass(frozen=True)
class AnnouncementPlan:
    segments: tuple[tuple[float, float], ...]  # (frequency Hz, duration ms); 0 Hz = gap
    transcript: str

    def __post_init__(self) -> None:
        for hz, ms in self.segments:
            if ms <= 0:
                raise ValueError(f"segment duration {ms} must be positive")
            if hz != 0 and not MIN_TONE_HZ <= hz <= MAX_TONE_HZ:
                raise ValueError(f"frequency {hz} outside {MIN_TONE_HZ}..{MAX_TONE_HZ}")

    @property
    def total_duration_ms(self) -> float:
        return sum(ms for _, ms in self.segments)


def plan_announcement(
    event: UiEvent, field: Field, config: PlannerConfig = DEFAULT_PLANNER
) -> AnnouncementPlan:
    """Earcon for the field kind, then one tone per label character."""
    segments: list[tuple[float, float]] = [
        (config.earcon_hz[field.kind], config.earcon_ms),
        (0, config.gap_ms),
    ]
    for ch in field.label.lower():
        if "a" <= ch <= "z":
            hz = config.letter_base_hz + config.letter_step_hz * (ord(ch) - ord("a"))
        else:
            hz = config.other_hz
        segments.append((hz, config.letter_ms))
        segments.append((0, config.gap_ms))
    return AnnouncementPlan(tuple(segments), event.transcript)


def divider_for_frequency(hz: float) -> int:
    if hz <= 0:
        raise ValueError(f"frequency must be positive, got {hz}")
    return max(1, min(255, round(BEEP_BASE_HZ / hz)))


def speak(
    plan: AnnouncementPlan,
    binding: driver.ControllerBinding,
    beep_nid: int,
    cad: int = 0,
    max_polls: int = driver.DEFAULT_MAX_POLLS,
) -> None:
    """Realize a plan on the codec's beep generator under virtual time.

    Each segment sets the divider then advances the controller clock by the
    segment duration; a final divider-0 write ends the announcement. On a
    transport error mid-plan the beep is best-effort silenced, then the
    original error propagates.
    """
    controller = binding.controller

    def beep(divider: int) -> None:
        cmd = VerbCommand(cad, beep_nid, VerbId.short12(SET_BEEP_CONTROL), divider)
        driver.send_verb(binding, cmd, max_polls=max_polls)

    try:
        for hz, duration_ms in plan.segments:
            beep(0 if hz == 0 else divider_for_frequency(hz))
            controller.advance_clock(duration_ms)
        beep(0)
    except BeepReaderError:
        try:
            beep(0)
        except BeepReaderError:
            pass
        raise


# -- form documents ----------------------------------------------------------


def load_form(text: str) -> Form:
    """Parse a form definition document (JSON)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormError(f"form is not valid JSON: {exc}") from None
    if not isinstance(doc, Mapping):
        raise FormError("form document must be a JSON object")
    raw_fields = doc.get("fields")
    if not isinstance(raw_fields, list) or not raw_fields:
        raise FormError("fields: section missing or empty")
    fields = []
    for i, raw in enumerate(raw_fields):
        where = f"fields[{i}]"
        if not isinstance(raw, Mapping):
            raise FormError(f"{where}: expected a mapping")
        for required in ("id", "label", "kind"):
            if not isinstance(raw.get(required), str):
                raise FormError(f"{where}.{required}: missing or not a string")
        value = raw.get("value")
        if raw["kind"] == TOGGLE and isinstance(value, str):
            if value not in ("on", "off"):
                raise FormError(f"{where}.value: toggle value must be on/off")
            value = value == "on"
        rng = raw.get("range") or {}
        if not isinstance(rng, Mapping):
            raise FormError(f"{where}.range: expected a mapping")
        fields.append(
            Field(
                id=raw["id"],
                label=raw["label"],
                kind=raw["kind"],
                options=list(raw["options"]) if "options" in raw else None,
                minimum=rng.get("min"),
                maximum=rng.get("max"),
                step=rng.get("step", 1),
                value=value,
            )
        )
    return Form(title=str(doc.get("title", "")), fields=fields)
