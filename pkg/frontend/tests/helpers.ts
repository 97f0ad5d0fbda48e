import { SpeakEaseClient } from "../src/api";
import { encodeWav, type Recorder } from "../src/audio";
import type { AudioPlayer } from "../src/player";
import { buildApp, type App } from "../src/app";
import { FakeServer } from "./fakeServer";

/** Recorder returning pre-scripted WAV clips, FIFO. */
export class ScriptedRecorder implements Recorder {
  private clips: Uint8Array[] = [];

  queue(seconds: number): void {
    this.clips.push(encodeWav(new Float32Array(Math.round(seconds * 16000)), 16000));
  }

  async start(): Promise<void> {}

  async stop(): Promise<Uint8Array> {
    const clip = this.clips.shift();
    if (!clip) throw new Error("no scripted clip queued");
    return clip;
  }
}

export class RecordingPlayer implements AudioPlayer {
  played: string[] = [];
  private finished: (() => void) | null = null;

  async play(url: string): Promise<void> {
    this.played.push(url);
    this.finished?.();
  }

  onFinished(callback: () => void): void {
    this.finished = callback;
  }
}

export interface Harness {
  app: App;
  root: HTMLElement;
  server: FakeServer;
  recorder: ScriptedRecorder;
  player: RecordingPlayer;
}

export async function mountApp(): Promise<Harness> {
  const server = new FakeServer();
  const recorder = new ScriptedRecorder();
  const player = new RecordingPlayer();
  const root = document.createElement("main");
  document.body.appendChild(root);
  const app = buildApp(root, {
    client: new SpeakEaseClient("http://service.test", server.fetch),
    recorder,
    player,
    profileId: "profile-1",
  });
  await app.ready;
  return { app, root, server, recorder, player };
}

/** Wait until a condition holds (microtask/timer churn in jsdom). */
export async function until(condition: () => boolean, timeoutMs = 2000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (!condition()) {
    if (Date.now() > deadline) throw new Error("condition never became true");
    await new Promise((resolve) => setTimeout(resolve, 5));
  }
}

export function cards(root: HTMLElement): HTMLButtonElement[] {
  return [...root.querySelectorAll<HTMLButtonElement>('[data-testid="card"]')];
}

export function click(element: Element | null): void {
  if (!element) throw new Error("element not found");
  (element as HTMLElement).click();
}

export function setText(root: HTMLElement, text: string): void {
  const field = root.querySelector<HTMLTextAreaElement>('[data-testid="message-field"]');
  if (!field) throw new Error("message field not found");
  field.value = text;
}

export function setReceiver(root: HTMLElement, value: string): void {
  const input = root.querySelector<HTMLInputElement>('[data-testid="receiver-input"]');
  if (!input) throw new Error("receiver input not found");
  input.value = value;
  input.dispatchEvent(new Event("change", { bubbles: true }));
}

export function pickMood(root: HTMLElement, mood: string): void {
  click(root.querySelector(`[data-mood="${mood}"]`));
}
