import type { FormSnapshot } from "./types.js";

/**
 * Render the form snapshot: one row per field with label, value, and a kind
 * badge; the focused row is marked both visually (class) and semantically
 * (aria-current), so host screen readers track it too.
 */
export function renderForm(container: HTMLElement, snapshot: FormSnapshot): void {
  if (
    !snapshot ||
    typeof snapshot.focus !== "number" ||
    !Array.isArray(snapshot.fields)
  ) {
    throw new TypeError("malformed form snapshot");
  }
  container.textContent = "";
  const title = document.createElement("h1");
  title.textContent = snapshot.title;
  container.appendChild(title);

  if (snapshot.fields.length === 0) {
    const empty = document.createElement("p");
    empty.className = "placeholder";
    empty.textContent = "no fields";
    container.appendChild(empty);
    return;
  }

  const list = document.createElement("ul");
  list.className = "fields";
  list.setAttribute("role", "listbox");
  list.setAttribute("aria-label", snapshot.title);
  snapshot.fields.forEach((field, index) => {
    const row = document.createElement("li");
    row.setAttribute("role", "option");
    row.dataset.fieldId = field.id;
    const focused = index === snapshot.focus;
    row.className = focused ? "field focused" : "field";
    row.setAttribute("aria-selected", focused ? "true" : "false");
    if (focused) {
      row.setAttribute("aria-current", "true");
    }

    const label = document.createElement("span");
    label.className = "label";
    label.textContent = field.label;
    const value = document.createElement("span");
    value.className = "value";
    value.textContent = field.value;
    const badge = document.createElement("span");
    badge.className = `badge badge-${field.kind}`;
    badge.textContent = field.kind;

    row.append(label, value, badge);
    list.appendChild(row);
  });
  container.appendChild(list);
}

export function focusedFieldId(container: HTMLElement): string | null {
  const row = container.querySelector<HTMLElement>("li[aria-current='true']");
  return row?.dataset.fieldId ?? null;
}

export function appendTranscript(pane: HTMLElement, text: string): void {
  const line = document.createElement("p");
  line.className = "line";
  line.textContent = text;
  pane.appendChild(line);
}

export function showError(banner: HTMLElement, message: string): void {
  banner.textContent = message;
  banner.hidden = false;
}

export function clearError(banner: HTMLElement): void {
  banner.textContent = "";
  banner.hidden = true;
}
