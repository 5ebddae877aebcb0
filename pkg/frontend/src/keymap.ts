import type { ServerKey } from "./types.js";

/** Map a keydown to the server's key name; null means "not ours". */
export function mapKeyboardEvent(
  event: Pick<KeyboardEvent, "key" | "shiftKey">,
): ServerKey | null {
  switch (event.key) {
    case "Tab":
      return event.shiftKey ? "ShiftTab" : "Tab";
    case "ArrowUp":
      return "Up";
    case "ArrowDown":
      return "Down";
    case "ArrowLeft":
      return "Left";
    case "ArrowRight":
      return "Right";
    case "Enter":
      return "Enter";
    default:
      return null;
  }
}
