/**
 * Receiver field plus the six-mood selector. Every mood button carries both
 * an icon and a text label, and the active mood is reflected via
 * aria-pressed so the state is available to assistive tech.
 */

import type { Mood } from "../types";
import { MOODS } from "../types";
import type { Store } from "../state";

export const MOOD_ICONS: Record<Mood, string> = {
  happy: "😀",
  scared: "😨",
  sad: "😢",
  angry: "😠",
  neutral: "😐",
  disgust: "🤢",
};

export interface ContextBarHandlers {
  onContextChange(receiver: string | null, mood: Mood): void;
}

export function createContextBar(
  document: Document,
  store: Store,
  handlers: ContextBarHandlers,
): HTMLElement {
  const bar = document.createElement("section");
  bar.className = "context-bar";
  bar.setAttribute("aria-label", "Conversation context");

  const receiverLabel = document.createElement("label");
  receiverLabel.className = "receiver-label";
  receiverLabel.textContent = "Talking to";
  const receiverInput = document.createElement("input");
  receiverInput.type = "text";
  receiverInput.name = "receiver";
  receiverInput.placeholder = "e.g. mom";
  receiverInput.maxLength = 64;
  receiverInput.setAttribute("data-testid", "receiver-input");
  receiverLabel.appendChild(receiverInput);
  bar.appendChild(receiverLabel);

  const moodGroup = document.createElement("div");
  moodGroup.className = "mood-selector";
  moodGroup.setAttribute("role", "group");
  moodGroup.setAttribute("aria-label", "Mood");
  const moodButtons = new Map<Mood, HTMLButtonElement>();
  for (const mood of MOODS) {
    const button = document.createElement("button");
    button.type = "button";
    button.className = "mood-button";
    button.setAttribute("data-mood", mood);
    const icon = document.createElement("span");
    icon.className = "mood-icon";
    icon.setAttribute("aria-hidden", "true");
    icon.textContent = MOOD_ICONS[mood];
    const label = document.createElement("span");
    label.className = "mood-label";
    label.textContent = mood;
    button.append(icon, label);
    button.addEventListener("click", () => {
      const receiver = receiverInput.value.trim() || null;
      handlers.onContextChange(receiver, mood);
    });
    moodButtons.set(mood, button);
    moodGroup.appendChild(button);
  }
  bar.appendChild(moodGroup);

  receiverInput.addEventListener("change", () => {
    const receiver = receiverInput.value.trim() || null;
    handlers.onContextChange(receiver, store.get().context.mood);
  });

  store.subscribe((state) => {
    for (const [mood, button] of moodButtons) {
      button.setAttribute("aria-pressed", String(state.context.mood === mood));
    }
    if (document.activeElement !== receiverInput) {
      receiverInput.value = state.context.receiver ?? "";
    }
  });

  return bar;
}
