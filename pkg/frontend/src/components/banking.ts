/**
 * Voice-banking wizard: pick an emotion, record the five scripted
 * sentences (re-recording any step), then finalize. Recordings survive a
 * failed finalize — the server session keeps them, so retry is one click.
 */

import type { Mood } from "../types";
import { MOODS } from "../types";
import type { Store } from "../state";
import { MOOD_ICONS } from "./contextBar";

export interface BankingHandlers {
  onStart(emotion: Mood): void;
  onRecordStep(step: number): void;
  onFinalize(): void;
}

export function createBankingWizard(
  document: Document,
  store: Store,
  handlers: BankingHandlers,
): HTMLElement {
  const wizard = document.createElement("section");
  wizard.className = "banking-wizard";
  wizard.setAttribute("aria-label", "Voice banking");
  wizard.setAttribute("data-testid", "banking-wizard");

  store.subscribe((state) => {
    wizard.textContent = "";

    const badges = document.createElement("div");
    badges.className = "voice-badges";
    badges.setAttribute("data-testid", "voice-badges");
    badges.setAttribute("aria-label", "Ready voices");
    for (const mood of state.readyVoices) {
      const badge = document.createElement("span");
      badge.className = "voice-badge";
      badge.setAttribute("data-testid", `voice-badge-${mood}`);
      badge.textContent = `${MOOD_ICONS[mood]} ${mood} voice ready`;
      badges.appendChild(badge);
    }
    wizard.appendChild(badges);

    if (!state.banking) {
      const heading = document.createElement("h2");
      heading.textContent = "Bank a voice";
      wizard.appendChild(heading);
      const picker = document.createElement("div");
      picker.className = "emotion-picker";
      picker.setAttribute("role", "group");
      picker.setAttribute("aria-label", "Choose an emotion to record");
      for (const mood of MOODS) {
        const button = document.createElement("button");
        button.type = "button";
        button.className = "emotion-choice";
        button.setAttribute("data-testid", `bank-${mood}`);
        button.textContent = `${MOOD_ICONS[mood]} ${mood}`;
        button.addEventListener("click", () => handlers.onStart(mood));
        picker.appendChild(button);
      }
      wizard.appendChild(picker);
      return;
    }

    const progress = state.banking;
    const heading = document.createElement("h2");
    heading.textContent = `Recording your ${progress.emotion} voice`;
    wizard.appendChild(heading);

    const steps = document.createElement("ol");
    steps.className = "banking-steps";
    progress.script.forEach((sentence, position) => {
      const step = position + 1;
      const item = document.createElement("li");
      item.className = "banking-step";
      item.setAttribute("data-testid", `banking-step-${step}`);
      const done = progress.recorded.includes(step);
      item.setAttribute("data-recorded", String(done));

      const text = document.createElement("p");
      text.className = "step-sentence";
      text.textContent = sentence;
      item.appendChild(text);

      const status = document.createElement("span");
      status.className = "step-status";
      status.textContent = done ? "recorded" : "not recorded";
      item.appendChild(status);

      const record = document.createElement("button");
      record.type = "button";
      record.className = "step-record";
      record.setAttribute("data-testid", `record-step-${step}`);
      record.textContent = done ? "Re-record" : "Record";
      record.addEventListener("click", () => handlers.onRecordStep(step));
      item.appendChild(record);

      if (progress.stepError && progress.stepErrorAt === step) {
        const error = document.createElement("p");
        error.className = "step-error";
        error.setAttribute("role", "alert");
        error.setAttribute("data-testid", `step-error-${step}`);
        error.textContent = progress.stepError;
        item.appendChild(error);
      }
      steps.appendChild(item);
    });
    wizard.appendChild(steps);

    const finalize = document.createElement("button");
    finalize.type = "button";
    finalize.className = "finalize-button";
    finalize.setAttribute("data-testid", "finalize-button");
    finalize.textContent = progress.state === "failed" ? "Retry finalize" : "Finalize voice";
    finalize.disabled = progress.recorded.length < 5;
    finalize.addEventListener("click", () => handlers.onFinalize());
    wizard.appendChild(finalize);
  });

  return wizard;
}
