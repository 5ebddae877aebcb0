/** Shapes of the access service's HTTP API. */

export type FieldKind = "selection" | "toggle" | "numeric" | "action";

export interface FieldView {
  id: string;
  label: string;
  kind: FieldKind;
  value: string;
  options?: string[];
  range?: { min: number; max: number; step: number };
}

export interface FormSnapshot {
  title: string;
  focus: number;
  fields: FieldView[];
}

export interface ApiEvent {
  kind: "FocusChanged" | "ValueChanged" | "Activated";
  field: string;
  transcript: string;
  clock_ms: number;
}

export type ServerKey =
  | "Tab"
  | "ShiftTab"
  | "Up"
  | "Down"
  | "Left"
  | "Right"
  | "Enter";
