/** Wire types for the speakease HTTP API (see ../docs/api.md). */

export const MOODS = ["happy", "scared", "sad", "angry", "neutral", "disgust"] as const;
export type Mood = (typeof MOODS)[number];

export type InputMode = "keyboard" | "emoji" | "voice";

export interface Profile {
  profile_id: string;
  display_name: string;
  voices: Record<string, EmotionVoice>;
  default_context: ContextSetting;
}

export interface ContextSetting {
  receiver: string | null;
  mood: Mood;
}

export interface Session {
  session_id: string;
  profile_id: string;
  context: ContextSetting;
  created_at: string;
}

export interface InputResponse {
  request_id: string;
  interpretations: [string, string, string, string];
}

export interface SelectResponse {
  audio_url: string;
  turn_id: string;
}

export interface EmotionVoice {
  emotion: Mood;
  provider_voice_id: string;
  status: "pending" | "ready" | "failed";
  created_at: string;
}

export interface BankingSession {
  session_id: string;
  profile_id: string;
  emotion: Mood;
  script: [string, string, string, string, string];
  samples: Record<string, unknown>;
  state: "collecting" | "complete" | "finalized" | "failed";
}

export interface AuditVerify {
  ok: boolean;
  first_bad_seq: number | null;
}

export interface ApiError {
  error: string;
  detail: string;
  kind?: string;
  retryable?: boolean;
}
