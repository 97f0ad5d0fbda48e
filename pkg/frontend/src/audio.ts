/**
 * Browser voice capture, normalized client-side to the service's audio
 * contract: WAV, PCM 16-bit, mono, 16 kHz. Capture uses MediaRecorder plus
 * an AudioContext decode; the resample/encode math is pure and testable.
 */

export const TARGET_SAMPLE_RATE = 16_000;

/** Linear-interpolation resample of mono float samples. */
export function resampleLinear(
  samples: Float32Array,
  fromRate: number,
  toRate: number = TARGET_SAMPLE_RATE,
): Float32Array {
  if (fromRate === toRate || samples.length === 0) return samples;
  const ratio = fromRate / toRate;
  const outLength = Math.max(1, Math.round(samples.length / ratio));
  const out = new Float32Array(outLength);
  for (let i = 0; i < outLength; i++) {
    const position = i * ratio;
    const left = Math.floor(position);
    const right = Math.min(left + 1, samples.length - 1);
    const frac = position - left;
    out[i] = samples[left] * (1 - frac) + samples[right] * frac;
  }
  return out;
}

/** Average down to mono. */
export function mixToMono(channels: Float32Array[]): Float32Array {
  if (channels.length === 1) return channels[0];
  const length = channels[0].length;
  const out = new Float32Array(length);
  for (const channel of channels) {
    for (let i = 0; i < length; i++) out[i] += channel[i] / channels.length;
  }
  return out;
}

/** Encode mono float samples as a PCM16 WAV file. */
export function encodeWav(samples: Float32Array, sampleRate: number = TARGET_SAMPLE_RATE): Uint8Array {
  const dataLength = samples.length * 2;
  const buffer = new ArrayBuffer(44 + dataLength);
  const view = new DataView(buffer);
  const writeAscii = (offset: number, text: string) => {
    for (let i = 0; i < text.length; i++) view.setUint8(offset + i, text.charCodeAt(i));
  };
  writeAscii(0, "RIFF");
  view.setUint32(4, 36 + dataLength, true);
  writeAscii(8, "WAVE");
  writeAscii(12, "fmt ");
  view.setUint32(16, 16, true); // PCM chunk size
  view.setUint16(20, 1, true); // PCM format
  view.setUint16(22, 1, true); // mono
  view.setUint32(24, sampleRate, true);
  view.setUint32(28, sampleRate * 2, true); // byte rate
  view.setUint16(32, 2, true); // block align
  view.setUint16(34, 16, true); // bits per sample
  writeAscii(36, "data");
  view.setUint32(40, dataLength, true);
  let offset = 44;
  for (let i = 0; i < samples.length; i++, offset += 2) {
    const clamped = Math.max(-1, Math.min(1, samples[i]));
    view.setInt16(offset, Math.round(clamped * 32767), true);
  }
  return new Uint8Array(buffer);
}

/** Duration in seconds of an encoded PCM16 mono WAV (header fields). */
export function wavDuration(wav: Uint8Array): number {
  const view = new DataView(wav.buffer, wav.byteOffset, wav.byteLength);
  const sampleRate = view.getUint32(24, true);
  const dataLength = view.getUint32(40, true);
  return dataLength / 2 / sampleRate;
}

export interface Recorder {
  /** Record until stop() resolves with canonical WAV bytes. */
  start(): Promise<void>;
  stop(): Promise<Uint8Array>;
}

/**
 * MediaRecorder-based capture. Instantiated only in real browsers; tests
 * substitute a scripted Recorder.
 */
export class MicrophoneRecorder implements Recorder {
  private mediaRecorder: MediaRecorder | null = null;
  private chunks: BlobPart[] = [];
  private stream: MediaStream | null = null;

  async start(): Promise<void> {
    this.stream = await navigator.mediaDevices.getUserMedia({ audio: true });
    this.chunks = [];
    this.mediaRecorder = new MediaRecorder(this.stream);
    this.mediaRecorder.addEventListener("dataavailable", (e) => this.chunks.push(e.data));
    this.mediaRecorder.start();
  }

  async stop(): Promise<Uint8Array> {
    const recorder = this.mediaRecorder;
    if (!recorder) throw new Error("recorder was never started");
    const blob = await new Promise<Blob>((resolve, reject) => {
      recorder.addEventListener("stop", () => resolve(new Blob(this.chunks)), { once: true });
      recorder.addEventListener("error", (e) => reject(e), { once: true });
      recorder.stop();
    });
    this.stream?.getTracks().forEach((track) => track.stop());
    const audioContext = new AudioContext();
    try {
      const decoded = await audioContext.decodeAudioData(await blob.arrayBuffer());
      const channels: Float32Array[] = [];
      for (let c = 0; c < decoded.numberOfChannels; c++) channels.push(decoded.getChannelData(c));
      const mono = mixToMono(channels);
      const resampled = resampleLinear(mono, decoded.sampleRate);
      return encodeWav(resampled);
    } finally {
      await audioContext.close();
    }
  }
}
