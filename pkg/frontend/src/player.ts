/** Plays one clip URL to completion; injectable so tests control timing. */
export type PlayClip = (url: string) => Promise<void>;

/** Default clip playback through an HTMLAudioElement. */
export function htmlAudioClip(url: string): Promise<void> {
  return new Promise((resolve, reject) => {
    const audio = new Audio(url);
    audio.addEventListener("ended", () => resolve(), { once: true });
    audio.addEventListener(
      "error",
      () => reject(new Error(`audio playback failed: ${url}`)),
      { once: true },
    );
    const playing = audio.play();
    if (playing && typeof playing.catch === "function") {
      playing.catch(reject);
    }
  });
}

/**
 * Serializes playback: a clip starts only after the previous one ended.
 * A failed clip rejects its own enqueue promise but never stalls the chain.
 */
export class SequentialPlayer {
  private tail: Promise<void> = Promise.resolve();
  private active = 0;

  constructor(private readonly playClip: PlayClip = htmlAudioClip) {}

  get playing(): boolean {
    return this.active > 0;
  }

  enqueue(url: string): Promise<void> {
    const next = this.tail.then(async () => {
      this.active += 1;
      try {
        await this.playClip(url);
      } finally {
        this.active -= 1;
      }
    });
    this.tail = next.then(
      () => undefined,
      () => undefined,
    );
    return next;
  }
}
