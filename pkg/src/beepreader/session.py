"""Session state shared by the CLI demo and the HTTP service.

A session owns one simulated machine, the demo form, and an append-only
event log. Key presses run the whole stack: navigation events feed the
announcement planner, plans are spoken through the driver onto the codec's
beep generator under virtual time, and the resulting timeline slice is
rendered to WAV bytes.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from . import driver, machine, reader
from .audio import timeline_to_pcm, write_wav
from .codec import CodecModel
from .controller import ControllerModel, PciBus
from .errors import BeepReaderError
from .machine import MachineProfile
from .reader import Form, PlannerConfig, UiEvent


class ScriptError(BeepReaderError):
    """A key script names an unknown key."""


@dataclass(frozen=True)
class LoggedEvent:
    clock_ms: float
    event: UiEvent


def default_form() -> Form:
    text = resources.files(__package__).joinpath("forms/demo-bios.json").read_text(
        encoding="utf-8"
    )
    return reader.load_form(text)


def default_script_path(name: str = "tab-tab-enter.keys") -> Path:
    return Path(str(resources.files(__package__).joinpath(f"scripts/{name}")))


def parse_key_script(text: str) -> list[str]:
    """One key name per line; blank lines and # comments are skipped."""
    keys = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line not in reader.KEYS:
            raise ScriptError(f"line {lineno}: unknown key {line!r}")
        keys.append(line)
    return keys


class Session:
    """One machine + one form + the event log behind CLI and HTTP."""

    def __init__(
        self,
        profile: MachineProfile | None = None,
        form: Form | None = None,
        planner: PlannerConfig | None = None,
        max_polls: int = driver.DEFAULT_MAX_POLLS,
    ) -> None:
        self.profile = profile or machine.load_machine_profile(None)
        self.bus: PciBus
        self.controller: ControllerModel
        self.codec: CodecModel
        self.bus, self.controller, self.codec = machine.build_machine(self.profile)
        self.binding = driver.attach(self.bus)
        topology = driver.discover_topology(
            self.binding, machine.DEFAULT_CODEC_ADDRESS, max_polls=max_polls
        )
        self.beep_nid = driver.find_beep_generator(topology)
        self.form = form or default_form()
        self.planner = planner or reader.DEFAULT_PLANNER
        self.max_polls = max_polls
        self.log: list[LoggedEvent] = []
        self.last_wav: bytes | None = None
        self.lock = threading.Lock()

    @property
    def events(self) -> list[UiEvent]:
        return [entry.event for entry in self.log]

    def press(self, key: str) -> list[LoggedEvent]:
        """Apply one key, announce every resulting event, render the audio."""
        window_start = self.controller.clock_ms
        _, events = reader.handle_key(self.form, key)
        logged = []
        for event in events:
            fld = self.form.field(event.field_id)
            plan = reader.plan_announcement(event, fld, self.planner)
            logged.append(LoggedEvent(self.controller.clock_ms, event))
            reader.speak(
                plan,
                self.binding,
                self.beep_nid,
                cad=machine.DEFAULT_CODEC_ADDRESS,
                max_polls=self.max_polls,
            )
        if events:
            self.last_wav = self._render_window(window_start, self.controller.clock_ms)
        self.log.extend(logged)
        return logged

    def run_script(self, keys: list[str]) -> list[LoggedEvent]:
        produced = []
        for key in keys:
            produced.extend(self.press(key))
        return produced

    def _render_window(self, start_ms: float, end_ms: float) -> bytes:
        timeline = self.codec.beep_timeline(self.beep_nid)
        window = [
            (t - start_ms, d) for t, d in timeline.entries if start_ms <= t <= end_ms
        ]
        pcm = timeline_to_pcm(window, end_ms - start_ms)
        return write_wav(pcm)

    def render_session_wav(self) -> bytes:
        """The whole session's audio, from t=0 to the current clock."""
        timeline = self.codec.beep_timeline(self.beep_nid)
        pcm = timeline_to_pcm(timeline, self.controller.clock_ms)
        return write_wav(pcm)

    def transcript_text(self) -> str:
        if not self.log:
            return ""
        return "\n".join(entry.event.transcript for entry in self.log) + "\n"

    def snapshot(self) -> dict:
        """The /api/form view: title, focus, and field states."""
        fields = []
        for f in self.form.fields:
            view: dict = {
                "id": f.id,
                "label": f.label,
                "kind": f.kind,
                "value": f.value_text(),
            }
            if f.kind == reader.SELECTION:
                view["options"] = list(f.options)
            if f.kind == reader.NUMERIC:
                view["range"] = {"min": f.minimum, "max": f.maximum, "step": f.step}
            fields.append(view)
        return {"title": self.form.title, "focus": self.form.focus_index, "fields": fields}
