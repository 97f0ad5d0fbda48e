/**
 * The four-candidate picker: the central interaction. Cards render only
 * while a request awaits selection, always exactly four, and each card is a
 * single large button so choosing an utterance is one action.
 */

import type { Store } from "../state";

export interface CardHandlers {
  onSelect(requestId: string, index: number): void;
}

export function createCards(document: Document, store: Store, handlers: CardHandlers): HTMLElement {
  const region = document.createElement("section");
  region.className = "cards";
  region.setAttribute("aria-label", "Suggested utterances");
  region.setAttribute("aria-live", "polite");
  region.setAttribute("data-testid", "cards");

  store.subscribe((state) => {
    region.textContent = "";
    if (!state.pending) return;
    const { requestId, items } = state.pending;
    items.forEach((text, index) => {
      const card = document.createElement("button");
      card.type = "button";
      card.className = "card";
      card.setAttribute("data-testid", "card");
      card.setAttribute("data-index", String(index));
      const number = document.createElement("span");
      number.className = "card-number";
      number.textContent = `${index + 1}.`;
      const body = document.createElement("span");
      body.className = "card-text";
      body.textContent = text;
      card.append(number, body);
      card.addEventListener("click", () => handlers.onSelect(requestId, index));
      region.appendChild(card);
    });
  });

  return region;
}
