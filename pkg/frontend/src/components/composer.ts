/**
 * Input composer: keyboard / emoji / voice mode tabs, a message field with
 * an emoji palette in emoji mode, and a push-to-talk toggle in voice mode.
 */

import type { InputMode } from "../types";
import type { Store } from "../state";
import type { Recorder } from "../audio";

const MODES: InputMode[] = ["keyboard", "emoji", "voice"];

const EMOJI_PALETTE = ["🍕", "💧", "🍽️", "🚽", "🛌", "💊", "📺", "🚶", "👍", "👎", "❤️", "😀"];

export interface ComposerHandlers {
  onSendText(text: string): void;
  onSendEmoji(text: string): void;
  onSendVoice(wav: Uint8Array): void;
  onError(message: string): void;
}

export function createComposer(
  document: Document,
  store: Store,
  recorder: Recorder,
  handlers: ComposerHandlers,
): HTMLElement {
  const section = document.createElement("section");
  section.className = "composer";
  section.setAttribute("aria-label", "Message composer");

  const tabs = document.createElement("div");
  tabs.className = "mode-tabs";
  tabs.setAttribute("role", "tablist");
  tabs.setAttribute("aria-label", "Input mode");
  const tabButtons = new Map<InputMode, HTMLButtonElement>();
  for (const mode of MODES) {
    const tab = document.createElement("button");
    tab.type = "button";
    tab.className = "mode-tab";
    tab.setAttribute("role", "tab");
    tab.setAttribute("data-mode", mode);
    tab.textContent = mode;
    tab.addEventListener("click", () => store.update({ inputMode: mode }));
    tabButtons.set(mode, tab);
    tabs.appendChild(tab);
  }
  section.appendChild(tabs);

  const field = document.createElement("textarea");
  field.className = "message-field";
  field.rows = 2;
  field.placeholder = "What do you want to say?";
  field.setAttribute("aria-label", "Message");
  field.setAttribute("data-testid", "message-field");
  section.appendChild(field);

  const palette = document.createElement("div");
  palette.className = "emoji-palette";
  palette.setAttribute("role", "group");
  palette.setAttribute("aria-label", "Quick emoji");
  for (const emoji of EMOJI_PALETTE) {
    const key = document.createElement("button");
    key.type = "button";
    key.className = "emoji-key";
    key.textContent = emoji;
    key.setAttribute("aria-label", `insert ${emoji}`);
    key.addEventListener("click", () => {
      field.value += emoji;
      field.focus();
    });
    palette.appendChild(key);
  }
  section.appendChild(palette);

  const hint = document.createElement("p");
  hint.className = "composer-hint";
  hint.setAttribute("role", "status");
  hint.setAttribute("data-testid", "composer-hint");
  hint.hidden = true;
  section.appendChild(hint);

  const send = document.createElement("button");
  send.type = "button";
  send.className = "send-button";
  send.textContent = "Send";
  send.setAttribute("data-testid", "send-button");
  send.addEventListener("click", () => {
    const text = field.value;
    if (store.get().inputMode === "emoji") {
      handlers.onSendEmoji(text);
    } else {
      handlers.onSendText(text);
    }
  });
  section.appendChild(send);

  field.addEventListener("keydown", (event: KeyboardEvent) => {
    if (event.key === "Enter" && !event.shiftKey) {
      event.preventDefault();
      send.click();
    }
  });

  const recordToggle = document.createElement("button");
  recordToggle.type = "button";
  recordToggle.className = "record-toggle";
  recordToggle.textContent = "Start recording";
  recordToggle.setAttribute("data-testid", "record-toggle");
  recordToggle.setAttribute("aria-pressed", "false");
  let recording = false;
  recordToggle.addEventListener("click", async () => {
    try {
      if (!recording) {
        await recorder.start();
        recording = true;
        recordToggle.textContent = "Stop and send";
        recordToggle.setAttribute("aria-pressed", "true");
      } else {
        const wav = await recorder.stop();
        recording = false;
        recordToggle.textContent = "Start recording";
        recordToggle.setAttribute("aria-pressed", "false");
        handlers.onSendVoice(wav);
      }
    } catch (error) {
      recording = false;
      recordToggle.textContent = "Start recording";
      recordToggle.setAttribute("aria-pressed", "false");
      handlers.onError(error instanceof Error ? error.message : "recording failed");
    }
  });
  section.appendChild(recordToggle);

  store.subscribe((state) => {
    for (const [mode, tab] of tabButtons) {
      tab.setAttribute("aria-selected", String(state.inputMode === mode));
    }
    palette.hidden = state.inputMode !== "emoji";
    recordToggle.hidden = state.inputMode !== "voice";
    field.hidden = state.inputMode === "voice";
    send.hidden = state.inputMode === "voice";
    hint.hidden = state.composerHint === null;
    hint.textContent = state.composerHint ?? "";
  });

  return section;
}

/** Clear the message field (after a successful send). */
export function clearField(root: HTMLElement): void {
  const field = root.querySelector<HTMLTextAreaElement>('[data-testid="message-field"]');
  if (field) field.value = "";
}
