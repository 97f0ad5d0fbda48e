/**
 * Application wiring. `buildApp` takes its dependencies (API client,
 * recorder, player) so the whole UI runs under jsdom in tests exactly as it
 * does in a browser; `bootstrap` constructs the real ones.
 *
 * The UI never fabricates speech: the only path to audio playback is a
 * successful select round-trip, so every play corresponds to exactly one
 * audit record on the service side.
 */

import { SpeakEaseClient, SpeakEaseError } from "./api";
import type { Recorder } from "./audio";
import { MicrophoneRecorder } from "./audio";
import type { AudioPlayer } from "./player";
import { DomAudioPlayer } from "./player";
import { Store } from "./state";
import type { Mood } from "./types";
import { createBankingWizard } from "./components/banking";
import { createCards } from "./components/cards";
import { clearField, createComposer } from "./components/composer";
import { createContextBar } from "./components/contextBar";

export interface AppDeps {
  client: SpeakEaseClient;
  recorder: Recorder;
  player: AudioPlayer;
  profileId: string;
  displayName?: string;
}

export interface App {
  store: Store;
  ready: Promise<void>;
}

export function buildApp(root: HTMLElement, deps: AppDeps): App {
  const { client, recorder, player } = deps;
  const document = root.ownerDocument;
  const store = new Store();

  root.classList.add("speakease-app");

  const banner = document.createElement("p");
  banner.className = "banner";
  banner.setAttribute("role", "alert");
  banner.setAttribute("data-testid", "banner");
  banner.hidden = true;
  root.appendChild(banner);

  const showBanner = (tone: "info" | "error", text: string) =>
    store.update({ banner: { tone, text } });
  const clearBanner = () => store.update({ banner: null });

  store.subscribe((state) => {
    banner.hidden = state.banner === null;
    banner.textContent = state.banner?.text ?? "";
    banner.className = state.banner ? `banner banner-${state.banner.tone}` : "banner";
  });

  const describe = (error: unknown): string =>
    error instanceof SpeakEaseError
      ? `${error.body.error}: ${error.body.detail}`
      : error instanceof Error
        ? error.message
        : "something went wrong";

  async function pushContext(receiver: string | null, mood: Mood): Promise<void> {
    const state = store.get();
    if (!state.sessionId) return;
    try {
      const session = await client.setContext(state.sessionId, { receiver, mood });
      store.update({ context: session.context, banner: null });
    } catch (error) {
      showBanner("error", describe(error));
    }
  }

  async function handleInterpretations(send: () => Promise<{ request_id: string; interpretations: string[] }>) {
    clearBanner();
    try {
      const response = await send();
      if (response.interpretations.every((item) => item === "")) {
        // the service answers empty input with four empty strings; show a
        // hint instead of blank cards
        store.update({ pending: null, composerHint: "Type, pick emoji, or record something first." });
        return;
      }
      store.setPending(response.request_id, response.interpretations);
      clearField(root);
    } catch (error) {
      showBanner("error", describe(error));
    }
  }

  const contextBar = createContextBar(document, store, {
    onContextChange: (receiver, mood) => void pushContext(receiver, mood),
  });
  root.appendChild(contextBar);

  const composer = createComposer(document, store, recorder, {
    onSendText: (text) =>
      void handleInterpretations(() => client.sendText(store.get().sessionId!, text)),
    onSendEmoji: (text) =>
      void handleInterpretations(() => client.sendEmoji(store.get().sessionId!, text)),
    onSendVoice: (wav) =>
      void handleInterpretations(() => client.sendVoice(store.get().sessionId!, wav)),
    onError: (message) => showBanner("error", message),
  });
  root.appendChild(composer);

  const cards = createCards(document, store, {
    onSelect: async (requestId, index) => {
      const sessionId = store.get().sessionId!;
      try {
        const selected = await client.select(sessionId, requestId, index);
        store.clearPending();
        store.update({ playback: "playing" });
        await player.play(client.resolveUrl(selected.audio_url));
      } catch (error) {
        // a failed select keeps the cards for retry
        showBanner("error", describe(error));
      }
    },
  });
  root.appendChild(cards);
  player.onFinished(() => store.update({ playback: "idle" }));

  async function refreshVoices(): Promise<void> {
    const { voices } = await client.listVoices(deps.profileId);
    const ready = Object.values(voices)
      .filter((voice) => voice.status === "ready")
      .map((voice) => voice.emotion);
    store.update({ readyVoices: ready });
  }

  const wizard = createBankingWizard(document, store, {
    onStart: async (emotion) => {
      try {
        const { session, script } = await client.startBanking(deps.profileId, emotion);
        store.update({
          banking: {
            emotion,
            script,
            recorded: [],
            state: session.state,
            stepError: null,
            stepErrorAt: null,
          },
          banner: null,
        });
      } catch (error) {
        showBanner("error", describe(error));
      }
    },
    onRecordStep: async (step) => {
      const banking = store.get().banking;
      if (!banking) return;
      try {
        await recorder.start();
        const wav = await recorder.stop();
        const { session } = await client.uploadSample(deps.profileId, banking.emotion, step, wav);
        const recorded = banking.recorded.includes(step)
          ? banking.recorded
          : [...banking.recorded, step];
        store.update({
          banking: { ...banking, recorded, state: session.state, stepError: null, stepErrorAt: null },
        });
      } catch (error) {
        store.update({
          banking: { ...banking, stepError: describe(error), stepErrorAt: step },
        });
      }
    },
    onFinalize: async () => {
      const banking = store.get().banking;
      if (!banking) return;
      try {
        await client.finalizeVoice(deps.profileId, banking.emotion);
        store.update({ banking: null, banner: null });
        await refreshVoices();
      } catch (error) {
        // recordings live in the server session; retry needs no re-recording
        store.update({ banking: { ...banking, state: "failed" } });
        showBanner("error", `Voice registration failed — your recordings are kept. ${describe(error)}`);
      }
    },
  });
  root.appendChild(wizard);

  const ready = (async () => {
    const session = await client.createSession(deps.profileId);
    store.update({ sessionId: session.session_id, profileId: deps.profileId, context: session.context });
    await refreshVoices();
  })();

  return { store, ready };
}

/** Browser entry point; configuration is just the service base URL. */
export async function bootstrap(root: HTMLElement): Promise<App> {
  const params = new URLSearchParams(window.location.search);
  const baseUrl = params.get("api") ?? "";
  const client = new SpeakEaseClient(baseUrl);
  let profileId = params.get("profile") ?? window.localStorage.getItem("speakease_profile");
  if (!profileId) {
    const profile = await client.createProfile("Speak Ease user");
    profileId = profile.profile_id;
    window.localStorage.setItem("speakease_profile", profileId);
  }
  return buildApp(root, {
    client,
    recorder: new MicrophoneRecorder(),
    player: new DomAudioPlayer(root.ownerDocument),
    profileId,
  });
}
