/**
 * UI state container. One source of truth, re-rendered on every change.
 *
 * Two invariants live here rather than in components: interpretation cards
 * exist only while a request_id awaits selection, and a non-empty response
 * always carries exactly four of them.
 */

import type { ContextSetting, InputMode, Mood } from "./types";

export interface PendingInterpretations {
  requestId: string;
  items: [string, string, string, string];
}

export interface BankingProgress {
  emotion: Mood;
  script: string[];
  /** indices already recorded this session */
  recorded: number[];
  state: "collecting" | "complete" | "finalized" | "failed";
  /** inline error at one step (e.g. sample too short) */
  stepError: string | null;
  stepErrorAt: number | null;
}

export interface UiState {
  sessionId: string | null;
  profileId: string | null;
  inputMode: InputMode;
  context: ContextSetting;
  pending: PendingInterpretations | null;
  playback: "idle" | "playing";
  banner: { tone: "info" | "error"; text: string } | null;
  composerHint: string | null;
  banking: BankingProgress | null;
  readyVoices: Mood[];
}

export function initialState(): UiState {
  return {
    sessionId: null,
    profileId: null,
    inputMode: "keyboard",
    context: { receiver: null, mood: "neutral" },
    pending: null,
    playback: "idle",
    banner: null,
    composerHint: null,
    banking: null,
    readyVoices: [],
  };
}

export type Listener = (state: UiState) => void;

export class Store {
  private state: UiState = initialState();
  private listeners: Listener[] = [];

  get(): UiState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    listener(this.state);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  update(patch: Partial<UiState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.state);
  }

  /** Park a non-empty four-card response for selection. */
  setPending(requestId: string, items: string[]): void {
    if (items.length !== 4) {
      throw new Error(`interpretation responses must carry exactly 4 items, got ${items.length}`);
    }
    this.update({
      pending: { requestId, items: items as [string, string, string, string] },
      composerHint: null,
    });
  }

  clearPending(): void {
    this.update({ pending: null });
  }
}
