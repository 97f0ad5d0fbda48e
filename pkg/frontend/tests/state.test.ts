import { describe, expect, it } from "vitest";

import { Store, initialState } from "../src/state";

describe("Store", () => {
  it("starts with no session, neutral mood, keyboard mode", () => {
    const state = initialState();
    expect(state.sessionId).toBeNull();
    expect(state.context).toEqual({ receiver: null, mood: "neutral" });
    expect(state.inputMode).toBe("keyboard");
    expect(state.pending).toBeNull();
  });

  it("notifies subscribers on update and supports unsubscribe", () => {
    const store = new Store();
    const seen: string[] = [];
    const unsubscribe = store.subscribe((state) => seen.push(state.inputMode));
    store.update({ inputMode: "emoji" });
    unsubscribe();
    store.update({ inputMode: "voice" });
    expect(seen).toEqual(["keyboard", "emoji"]);
  });

  it("setPending accepts exactly four items", () => {
    const store = new Store();
    store.setPending("r1", ["a", "b", "c", "d"]);
    expect(store.get().pending).toEqual({ requestId: "r1", items: ["a", "b", "c", "d"] });
    expect(() => store.setPending("r2", ["a", "b", "c"])).toThrow(/exactly 4/);
    expect(() => store.setPending("r3", ["a", "b", "c", "d", "e"])).toThrow(/exactly 4/);
  });

  it("clearPending removes the cards state", () => {
    const store = new Store();
    store.setPending("r1", ["a", "b", "c", "d"]);
    store.clearPending();
    expect(store.get().pending).toBeNull();
  });
});
