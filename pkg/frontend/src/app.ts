import { ApiClient } from "./api.js";
import { mapKeyboardEvent } from "./keymap.js";
import { SequentialPlayer } from "./player.js";
import type { ServerKey } from "./types.js";
import {
  appendTranscript,
  clearError,
  renderForm,
  showError,
} from "./view.js";

export interface AppElements {
  form: HTMLElement;
  transcript: HTMLElement;
  banner: HTMLElement;
}

/**
 * The key loop: keydown -> POST /api/key -> re-render from a fresh
 * GET /api/form -> fetch and play /api/audio/last. The UI holds no form
 * state of its own.
 *
 * Keys are serialized through a one-slot queue: while a key is being
 * processed (including its audio), one follow-up key waits in the slot and
 * any further keys are dropped.
 */
export class App {
  private busy = false;
  private pendingKey: ServerKey | null = null;
  private clipCounter = 0;

  constructor(
    private readonly api: ApiClient,
    private readonly player: SequentialPlayer,
    private readonly elements: AppElements,
  ) {}

  async start(): Promise<void> {
    try {
      renderForm(this.elements.form, await this.api.form());
      clearError(this.elements.banner);
    } catch (error) {
      showError(this.elements.banner, String(error));
    }
  }

  handleKeydown(event: KeyboardEvent): void {
    const key = mapKeyboardEvent(event);
    if (key === null) {
      return; // unmapped keys never reach the server
    }
    event.preventDefault();
    void this.submit(key);
  }

  async submit(key: ServerKey): Promise<void> {
    if (this.busy) {
      if (this.pendingKey === null) {
        this.pendingKey = key;
      }
      return;
    }
    this.busy = true;
    try {
      let next: ServerKey | null = key;
      while (next !== null) {
        await this.processKey(next);
        next = this.pendingKey;
        this.pendingKey = null;
      }
    } finally {
      this.busy = false;
    }
  }

  private async processKey(key: ServerKey): Promise<void> {
    try {
      const events = await this.api.sendKey(key);
      for (const event of events) {
        appendTranscript(this.elements.transcript, event.transcript);
      }
      renderForm(this.elements.form, await this.api.form());
      clearError(this.elements.banner);
      if (events.length > 0) {
        this.clipCounter += 1;
        await this.player.enqueue(
          `${this.api.lastAudioUrl()}?clip=${this.clipCounter}`,
        );
      }
    } catch (error) {
      this.pendingKey = null; // queued keys are dropped, never replayed
      showError(this.elements.banner, String(error));
    }
  }
}
