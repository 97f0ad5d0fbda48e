// @vitest-environment jsdom
/**
 * Scripted end-to-end drives of the conversation surface:
 * type -> four cards -> select -> play, including the mood-switch scenario,
 * asserting exactly four cards and exactly one audit record per play.
 */

import { beforeEach, describe, expect, it } from "vitest";

import { cards, click, mountApp, pickMood, setReceiver, setText, until, type Harness } from "./helpers";

let h: Harness;

beforeEach(async () => {
  document.body.innerHTML = "";
  h = await mountApp();
});

async function send(text: string): Promise<void> {
  setText(h.root, text);
  click(h.root.querySelector('[data-testid="send-button"]'));
  await until(() => cards(h.root).length > 0 || !h.root.querySelector('[data-testid="composer-hint"][hidden]'));
}

describe("pizza scenario", () => {
  it("type -> four cards -> select -> play, one audit record", async () => {
    setReceiver(h.root, "mom");
    pickMood(h.root, "happy");
    await until(() => h.app.store.get().context.mood === "happy");

    setText(h.root, "I want to eat pizza");
    click(h.root.querySelector('[data-testid="send-button"]'));
    await until(() => cards(h.root).length === 4);

    const rendered = cards(h.root);
    expect(rendered).toHaveLength(4);
    const texts = rendered.map((card) => card.querySelector(".card-text")!.textContent);
    expect(texts).toContain("Mom, I'm so happy to eat pizza tonight!");

    const target = rendered.find(
      (card) => card.textContent!.includes("Mom, I'm so happy to eat pizza tonight!"),
    )!;
    click(target);
    await until(() => h.player.played.length === 1);

    expect(h.server.auditRecords).toBe(1);
    expect(h.player.played[0]).toContain("/v1/blobs/");
    expect(cards(h.root)).toHaveLength(0); // cards cleared after the play
  });

  it("mood switch to sad/friend changes the suggestions", async () => {
    setReceiver(h.root, "friend");
    pickMood(h.root, "sad");
    await until(() => h.app.store.get().context.mood === "sad");

    setText(h.root, "I want to eat pizza");
    click(h.root.querySelector('[data-testid="send-button"]'));
    await until(() => cards(h.root).length === 4);

    const texts = cards(h.root).map((card) => card.querySelector(".card-text")!.textContent);
    expect(texts).toContain("I feel down today, maybe pizza will help.");

    click(cards(h.root)[0]);
    await until(() => h.player.played.length === 1);
    expect(h.server.auditRecords).toBe(1);
  });

  it("every play corresponds to exactly one audit record", async () => {
    for (const [i, mood] of (["happy", "neutral", "angry"] as const).entries()) {
      pickMood(h.root, mood);
      await until(() => h.app.store.get().context.mood === mood);
      setText(h.root, `message number ${i}`);
      click(h.root.querySelector('[data-testid="send-button"]'));
      await until(() => cards(h.root).length === 4);
      click(cards(h.root)[i % 4]);
      await until(() => h.player.played.length === i + 1);
    }
    expect(h.player.played).toHaveLength(3);
    expect(h.server.auditRecords).toBe(3);
  });
});

describe("composer behavior", () => {
  it("empty text suppresses the four empty cards and shows a hint", async () => {
    setText(h.root, "   ");
    click(h.root.querySelector('[data-testid="send-button"]'));
    const hint = h.root.querySelector<HTMLElement>('[data-testid="composer-hint"]')!;
    await until(() => !hint.hidden);
    expect(cards(h.root)).toHaveLength(0);
    expect(hint.textContent).toMatch(/type|emoji|record/i);
    expect(h.server.auditRecords).toBe(0);
  });

  it("emoji mode sends emoji input and renders four cards", async () => {
    click(h.root.querySelector('[data-mode="emoji"]'));
    // palette keys append to the field
    const keys = h.root.querySelectorAll<HTMLButtonElement>(".emoji-key");
    click(keys[0]); // 🍕
    click(h.root.querySelector('[data-testid="send-button"]'));
    await until(() => cards(h.root).length === 4);
    expect(cards(h.root)).toHaveLength(4);
  });

  it("voice mode records, sends, and renders four cards", async () => {
    click(h.root.querySelector('[data-mode="voice"]'));
    h.recorder.queue(1.5);
    const toggle = h.root.querySelector<HTMLButtonElement>('[data-testid="record-toggle"]')!;
    click(toggle); // start
    await until(() => toggle.getAttribute("aria-pressed") === "true");
    click(toggle); // stop and send
    await until(() => cards(h.root).length === 4);
  });
});

describe("failure handling", () => {
  it("a failed select keeps the cards intact for retry", async () => {
    setText(h.root, "try again later");
    click(h.root.querySelector('[data-testid="send-button"]'));
    await until(() => cards(h.root).length === 4);

    h.server.failNextSelect = true;
    click(cards(h.root)[0]);
    const banner = h.root.querySelector<HTMLElement>('[data-testid="banner"]')!;
    await until(() => !banner.hidden);

    expect(h.player.played).toHaveLength(0);
    expect(h.server.auditRecords).toBe(0);
    expect(cards(h.root)).toHaveLength(4); // still selectable

    click(cards(h.root)[0]);
    await until(() => h.player.played.length === 1);
    expect(h.server.auditRecords).toBe(1);
  });

  it("selecting twice cannot double-speak (stale request -> banner, no play)", async () => {
    setText(h.root, "only once");
    click(h.root.querySelector('[data-testid="send-button"]'));
    await until(() => cards(h.root).length === 4);
    const requestId = h.app.store.get().pending!.requestId;
    click(cards(h.root)[0]);
    await until(() => h.player.played.length === 1);

    // simulate a raced duplicate selection of the consumed request
    const client = new (await import("../src/api")).SpeakEaseClient(
      "http://service.test", h.server.fetch,
    );
    await expect(
      client.select(h.app.store.get().sessionId!, requestId, 0),
    ).rejects.toMatchObject({ status: 409 });
    expect(h.server.auditRecords).toBe(1);
  });
});

describe("context bar", () => {
  it("shows exactly the six moods with icon and label", () => {
    const buttons = [...h.root.querySelectorAll(".mood-button")];
    expect(buttons).toHaveLength(6);
    const labels = buttons.map((b) => b.querySelector(".mood-label")!.textContent);
    expect(labels).toEqual(["happy", "scared", "sad", "angry", "neutral", "disgust"]);
    for (const button of buttons) {
      expect(button.querySelector(".mood-icon")!.textContent!.length).toBeGreaterThan(0);
    }
  });

  it("mood and receiver changes reach the service before the next input", async () => {
    setReceiver(h.root, "mom");
    pickMood(h.root, "happy");
    await until(() => h.app.store.get().context.receiver === "mom");
    expect(h.app.store.get().context.mood).toBe("happy");
  });
});
