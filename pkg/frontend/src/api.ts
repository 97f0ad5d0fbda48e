/**
 * Typed client for the speakease service. The UI talks to the API and
 * nothing else; the fetch implementation is injectable so tests can run
 * against a fake transport.
 */

import type {
  ApiError,
  AuditVerify,
  BankingSession,
  ContextSetting,
  EmotionVoice,
  InputResponse,
  Mood,
  Profile,
  SelectResponse,
  Session,
} from "./types";

export class SpeakEaseError extends Error {
  readonly status: number;
  readonly body: ApiError;

  constructor(status: number, body: ApiError) {
    super(`${body.error}: ${body.detail}`);
    this.status = status;
    this.body = body;
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class SpeakEaseClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  resolveUrl(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: {} };
    if (body instanceof Uint8Array) {
      init.headers = { "content-type": "audio/wav" };
      init.body = body;
    } else if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchImpl(this.resolveUrl(path), init);
    if (!response.ok) {
      let parsed: ApiError;
      try {
        parsed = (await response.json()) as ApiError;
      } catch {
        parsed = { error: `HTTP ${response.status}`, detail: response.statusText };
      }
      throw new SpeakEaseError(response.status, parsed);
    }
    return (await response.json()) as T;
  }

  createProfile(displayName: string): Promise<Profile> {
    return this.request("POST", "/v1/profiles", { display_name: displayName });
  }

  getProfile(profileId: string): Promise<Profile> {
    return this.request("GET", `/v1/profiles/${profileId}`);
  }

  createSession(profileId: string): Promise<Session> {
    return this.request("POST", "/v1/sessions", { profile_id: profileId });
  }

  setContext(sessionId: string, context: ContextSetting): Promise<Session> {
    return this.request("PUT", `/v1/sessions/${sessionId}/context`, context);
  }

  sendText(sessionId: string, text: string): Promise<InputResponse> {
    return this.request("POST", `/v1/sessions/${sessionId}/input`, { kind: "text", text });
  }

  sendEmoji(sessionId: string, text: string): Promise<InputResponse> {
    return this.request("POST", `/v1/sessions/${sessionId}/input`, { kind: "emoji", text });
  }

  sendVoice(sessionId: string, wav: Uint8Array): Promise<InputResponse> {
    return this.request("POST", `/v1/sessions/${sessionId}/input`, {
      kind: "voice",
      audio_b64: base64Encode(wav),
    });
  }

  select(sessionId: string, requestId: string, index: number): Promise<SelectResponse> {
    return this.request("POST", `/v1/sessions/${sessionId}/select`, {
      request_id: requestId,
      index,
    });
  }

  startBanking(profileId: string, mood: Mood): Promise<{ session: BankingSession; script: string[] }> {
    return this.request("POST", `/v1/voicebank/${profileId}/${mood}/start`);
  }

  uploadSample(
    profileId: string,
    mood: Mood,
    index: number,
    wav: Uint8Array,
  ): Promise<{ session: BankingSession }> {
    return this.request("POST", `/v1/voicebank/${profileId}/${mood}/samples/${index}`, wav);
  }

  finalizeVoice(profileId: string, mood: Mood): Promise<{ voice: EmotionVoice }> {
    return this.request("POST", `/v1/voicebank/${profileId}/${mood}/finalize`);
  }

  listVoices(profileId: string): Promise<{ voices: Record<string, EmotionVoice> }> {
    return this.request("GET", `/v1/voicebank/${profileId}/voices`);
  }

  verifyAudit(profileId: string): Promise<AuditVerify> {
    return this.request("GET", `/v1/audit/${profileId}/verify`);
  }
}

export function base64Encode(bytes: Uint8Array): string {
  let binary = "";
  const chunk = 0x8000;
  for (let i = 0; i < bytes.length; i += chunk) {
    binary += String.fromCharCode(...bytes.subarray(i, i + chunk));
  }
  return btoa(binary);
}
