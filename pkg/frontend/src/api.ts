import type { ApiEvent, FormSnapshot, ServerKey } from "./types.js";

/** Thin typed client over the access service; all state lives server-side. */
export class ApiClient {
  constructor(private readonly base: string = "") {}

  async form(): Promise<FormSnapshot> {
    const response = await fetch(`${this.base}/api/form`);
    if (!response.ok) {
      throw new Error(`GET /api/form failed: HTTP ${response.status}`);
    }
    return (await response.json()) as FormSnapshot;
  }

  async sendKey(key: ServerKey): Promise<ApiEvent[]> {
    const response = await fetch(`${this.base}/api/key`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ key }),
    });
    if (!response.ok) {
      throw new Error(`POST /api/key failed: HTTP ${response.status}`);
    }
    const body = (await response.json()) as { events: ApiEvent[] };
    return body.events;
  }

  lastAudioUrl(): string {
    return `${this.base}/api/audio/last`;
  }

  async transcript(): Promise<string> {
    const response = await fetch(`${this.base}/api/transcript`);
    if (!response.ok) {
      throw new Error(`GET /api/transcript failed: HTTP ${response.status}`);
    }
    return response.text();
  }
}
