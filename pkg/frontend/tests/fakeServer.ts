/**
 * In-memory implementation of the service contract (docs/api.md) behind a
 * fetch-compatible function. It mirrors the real service's observable
 * behavior — four-item interpretation sets, one-shot request ids with 409
 * on replays, audit records only on successful selects, banking-session
 * state — so UI tests assert the same invariants end-to-end tests would.
 */

import { wavDuration } from "../src/audio";
import type { FetchLike } from "../src/api";

interface PendingRequest {
  items: string[];
}

interface BankingState {
  emotion: string;
  samples: Set<number>;
  state: "collecting" | "complete" | "finalized" | "failed";
}

const SCRIPT: [string, string, string, string, string] = [
  "Today feels like a really good day and I want everyone to know it.",
  "I just heard the best news and I can't stop smiling about it.",
  "Thank you so much, this is exactly what I was hoping for!",
  "Let's celebrate together, I feel wonderful right now.",
  "That made me laugh out loud, what a great moment.",
];

export class FakeServer {
  auditRecords = 0;
  selectCalls = 0;
  rejectNextFinalize = false;
  failNextSelect = false;

  private context = { receiver: null as string | null, mood: "neutral" };
  private pending = new Map<string, PendingRequest>();
  private banking = new Map<string, BankingState>();
  private voices = new Map<string, { emotion: string; status: string; voiceId: string }>();
  private nextId = 1;

  readonly fetch: FetchLike = async (url, init) => this.route(url, init);

  private id(prefix: string): string {
    return `${prefix}-${this.nextId++}`;
  }

  private json(status: number, body: unknown): Response {
    return new Response(JSON.stringify(body), {
      status,
      headers: { "content-type": "application/json" },
    });
  }

  private error(status: number, error: string, detail = "", extra: Record<string, unknown> = {}) {
    return this.json(status, { error, detail, ...extra });
  }

  private interpretationsFor(kind: string, text: string): string[] {
    if (text.trim() === "") return ["", "", "", ""];
    const mood = this.context.mood;
    const receiver = this.context.receiver;
    const pizza = text.includes("pizza") || text.includes("🍕");
    if (pizza && mood === "happy" && receiver === "mom") {
      return [
        "Mom, I'm so happy to eat pizza tonight!",
        "I can't wait to have some pizza, Mom.",
        "Mom, pizza tonight would make me so happy!",
        "I'm really excited to eat pizza tonight, Mom!",
      ];
    }
    if (pizza && mood === "sad" && receiver === "friend") {
      return [
        "I feel down today, maybe pizza will help.",
        "Dude, I'm not feeling great, but pizza might cheer me up.",
        "I'm feeling low today, but pizza could lift my mood.",
        "Not my best day, though pizza might make it better.",
      ];
    }
    return [1, 2, 3, 4].map((n) => `V${n}: ${text}`);
  }

  private async route(url: string, init?: RequestInit): Promise<Response> {
    const method = init?.method ?? "GET";
    const path = url.replace(/^https?:\/\/[^/]+/, "");
    const body = typeof init?.body === "string" ? JSON.parse(init.body) : undefined;

    if (method === "POST" && path === "/v1/profiles") {
      return this.json(200, {
        profile_id: this.id("profile"),
        display_name: body.display_name,
        voices: {},
        default_context: { receiver: null, mood: "neutral" },
      });
    }
    if (method === "POST" && path === "/v1/sessions") {
      return this.json(200, {
        session_id: this.id("session"),
        profile_id: body.profile_id,
        context: this.context,
        created_at: new Date().toISOString(),
      });
    }
    let match = path.match(/^\/v1\/sessions\/([^/]+)\/context$/);
    if (method === "PUT" && match) {
      if (typeof body.receiver === "string" && body.receiver.length > 64) {
        return this.error(422, "ValidationError", "receiver too long");
      }
      this.context = { receiver: body.receiver ?? null, mood: body.mood };
      return this.json(200, {
        session_id: match[1],
        profile_id: "profile-1",
        context: this.context,
        created_at: new Date().toISOString(),
      });
    }
    match = path.match(/^\/v1\/sessions\/([^/]+)\/input$/);
    if (method === "POST" && match) {
      if (body.kind !== "text" && body.kind !== "emoji" && body.kind !== "voice") {
        return this.error(400, "SchemaViolation", "bad kind");
      }
      const text = body.kind === "voice" ? "A wuand...a...izza." : (body.text as string);
      const items = this.interpretationsFor(body.kind, text);
      const requestId = this.id("request");
      this.pending.set(requestId, { items });
      return this.json(200, { request_id: requestId, interpretations: items });
    }
    match = path.match(/^\/v1\/sessions\/([^/]+)\/select$/);
    if (method === "POST" && match) {
      this.selectCalls++;
      if (this.failNextSelect) {
        this.failNextSelect = false;
        return this.error(502, "ProviderError", "scripted outage", {
          kind: "Unavailable",
          retryable: true,
        });
      }
      const pending = this.pending.get(body.request_id);
      if (!pending) {
        return this.error(409, "StaleRequest", "unknown or already selected");
      }
      const text = pending.items[body.index];
      if (text === "") return this.error(422, "EmptyTextError", "nothing to speak");
      this.pending.delete(body.request_id);
      this.auditRecords++;
      return this.json(200, {
        audio_url: `/v1/blobs/${"ab".repeat(32)}`,
        turn_id: this.id("turn"),
      });
    }
    match = path.match(/^\/v1\/voicebank\/([^/]+)\/([^/]+)\/start$/);
    if (method === "POST" && match) {
      const key = `${match[1]}:${match[2]}`;
      this.banking.set(key, { emotion: match[2], samples: new Set(), state: "collecting" });
      return this.json(200, {
        session: this.bankingBody(match[1], key),
        script: SCRIPT,
      });
    }
    match = path.match(/^\/v1\/voicebank\/([^/]+)\/([^/]+)\/samples\/(\d+)$/);
    if (method === "POST" && match) {
      const key = `${match[1]}:${match[2]}`;
      const banking = this.banking.get(key);
      if (!banking) return this.error(409, "SessionNotCollecting", "no session");
      const wav = init?.body as Uint8Array;
      if (wavDuration(wav) < 1.0) {
        return this.error(422, "SampleTooShort", "sample is shorter than 1.0s");
      }
      banking.samples.add(Number(match[3]));
      if (banking.samples.size === 5) banking.state = "complete";
      return this.json(200, { session: this.bankingBody(match[1], key) });
    }
    match = path.match(/^\/v1\/voicebank\/([^/]+)\/([^/]+)\/finalize$/);
    if (method === "POST" && match) {
      const key = `${match[1]}:${match[2]}`;
      const banking = this.banking.get(key);
      if (!banking) return this.error(409, "SessionNotCollecting", "no session");
      if (banking.samples.size < 5) {
        return this.error(409, "IncompleteSession", `${banking.samples.size}/5 samples`);
      }
      if (this.rejectNextFinalize) {
        this.rejectNextFinalize = false;
        this.voices.set(`${match[1]}:${match[2]}`, {
          emotion: match[2], status: "failed", voiceId: "",
        });
        return this.error(502, "ProviderError", "scripted rejection", {
          kind: "Rejected",
          retryable: false,
        });
      }
      banking.state = "finalized";
      this.voices.set(`${match[1]}:${match[2]}`, {
        emotion: match[2], status: "ready", voiceId: "voice-12345678",
      });
      return this.json(200, {
        voice: {
          emotion: match[2],
          provider_voice_id: "voice-12345678",
          status: "ready",
          created_at: new Date().toISOString(),
        },
      });
    }
    match = path.match(/^\/v1\/voicebank\/([^/]+)\/voices$/);
    if (method === "GET" && match) {
      const voices: Record<string, unknown> = {};
      for (const [key, voice] of this.voices) {
        if (key.startsWith(`${match[1]}:`) && voice.status === "ready") {
          voices[voice.emotion] = {
            emotion: voice.emotion,
            provider_voice_id: voice.voiceId,
            status: voice.status,
            created_at: new Date().toISOString(),
          };
        }
      }
      return this.json(200, { voices });
    }
    match = path.match(/^\/v1\/audit\/([^/]+)\/verify$/);
    if (method === "GET" && match) {
      return this.json(200, { ok: true, first_bad_seq: null });
    }
    if (path.startsWith("/v1/blobs/")) {
      return new Response(new Uint8Array([0x52, 0x49, 0x46, 0x46]), {
        status: 200,
        headers: { "content-type": "audio/wav" },
      });
    }
    return this.error(404, "UnknownRoute", path);
  }

  private bankingBody(profileId: string, key: string) {
    const banking = this.banking.get(key)!;
    return {
      session_id: key,
      profile_id: profileId,
      emotion: banking.emotion,
      script: SCRIPT,
      samples: Object.fromEntries([...banking.samples].map((i) => [String(i), {}])),
      state: banking.state,
    };
  }
}
