/** Audio playback behind an interface so tests can observe play calls. */

export interface AudioPlayer {
  play(url: string): Promise<void>;
  onFinished(callback: () => void): void;
}

export class DomAudioPlayer implements AudioPlayer {
  private audio: HTMLAudioElement;
  private finishedCallback: (() => void) | null = null;

  constructor(document: Document) {
    this.audio = document.createElement("audio");
    this.audio.setAttribute("data-testid", "speech-audio");
    this.audio.addEventListener("ended", () => this.finishedCallback?.());
  }

  async play(url: string): Promise<void> {
    this.audio.src = url;
    const playing = this.audio.play();
    // jsdom's audio element has no real playback; treat it as instant
    if (playing && typeof playing.then === "function") {
      try {
        await playing;
      } catch {
        this.finishedCallback?.();
        throw new Error("playback failed");
      }
    } else {
      this.finishedCallback?.();
    }
  }

  onFinished(callback: () => void): void {
    this.finishedCallback = callback;
  }
}
