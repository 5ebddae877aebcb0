import { describe, expect, it } from "vitest";

import { mapKeyboardEvent } from "../src/keymap.js";

describe("mapKeyboardEvent", () => {
  it("maps the navigation keys", () => {
    expect(mapKeyboardEvent({ key: "Tab", shiftKey: false })).toBe("Tab");
    expect(mapKeyboardEvent({ key: "Tab", shiftKey: true })).toBe("ShiftTab");
    expect(mapKeyboardEvent({ key: "ArrowUp", shiftKey: false })).toBe("Up");
    expect(mapKeyboardEvent({ key: "ArrowDown", shiftKey: false })).toBe("Down");
    expect(mapKeyboardEvent({ key: "ArrowLeft", shiftKey: false })).toBe("Left");
    expect(mapKeyboardEvent({ key: "ArrowRight", shiftKey: false })).toBe("Right");
    expect(mapKeyboardEvent({ key: "Enter", shiftKey: false })).toBe("Enter");
  });

  it("ignores everything else", () => {
    expect(mapKeyboardEvent({ key: "a", shiftKey: false })).toBeNull();
    expect(mapKeyboardEvent({ key: "Escape", shiftKey: false })).toBeNull();
    expect(mapKeyboardEvent({ key: "F1", shiftKey: true })).toBeNull();
  });
});
