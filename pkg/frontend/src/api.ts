/**
 * Typed client for the novascout session service. The console never computes
 * vision results itself; every displayed number comes from these responses.
 */

export interface SessionConfig {
  theta_deg: number;
  blur_sigma_frac: number;
  min_segment_frac: number;
  mode: "novelty" | "interest" | "both";
  k_points: number;
  retain_patterns: boolean;
}

export interface SessionInfo {
  id: string;
  config: SessionConfig;
  image_count: number;
  stored_count: number;
}

export interface SegmentRecord {
  segment_id: number;
  pixel_count: number;
  mean_h: number;
  mean_s: number;
  mean_i: number;
  bins?: number[];
  pattern?: string;
  energy?: number;
  novel?: boolean;
  stored?: boolean;
}

export interface InterestPointRecord {
  x: number;
  y: number;
  score: number;
}

export interface ImageRecord {
  image_index: number;
  segment_count: number;
  segments: SegmentRecord[];
  interest_points?: InterestPointRecord[];
  degenerate?: boolean;
  map_urls: Record<string, string>;
  stored_count?: number;
  timings_ms?: Record<string, number>;
}

export interface MemorySnapshot {
  format: string;
  n: number;
  stored_count: number;
  weights: number[];
  patterns?: string[];
}

export interface SessionSummary {
  images_processed: number;
  segments_seen: number;
  patterns_stored: number;
  novel_rate_per_image: number[];
}

export class ServiceError extends Error {
  constructor(
    public readonly status: number,
    public readonly kind: string,
    message: string,
  ) {
    super(message);
    this.name = "ServiceError";
  }
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ConsoleApi {
  constructor(
    public readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  /** Absolute URL for a service-relative path such as a map_urls entry. */
  absolute(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(this.absolute(path), init);
    const body = await response.text();
    let parsed: unknown = null;
    try {
      parsed = body ? JSON.parse(body) : null;
    } catch {
      parsed = null;
    }
    if (!response.ok) {
      const doc = (parsed ?? {}) as { error?: string; message?: string };
      throw new ServiceError(
        response.status,
        doc.error ?? "http-error",
        doc.message ?? `${response.status} on ${path}`,
      );
    }
    return parsed as T;
  }

  createSession(overrides: Partial<SessionConfig> = {}): Promise<SessionInfo> {
    return this.request<SessionInfo>("/sessions", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(overrides),
    });
  }

  submitImage(sessionId: string, imageBytes: Blob | ArrayBuffer | Uint8Array): Promise<ImageRecord> {
    return this.request<ImageRecord>(`/sessions/${sessionId}/images`, {
      method: "POST",
      headers: { "content-type": "application/octet-stream" },
      body: imageBytes as BodyInit,
    });
  }

  getMemory(sessionId: string): Promise<MemorySnapshot> {
    return this.request<MemorySnapshot>(`/sessions/${sessionId}/memory`);
  }

  resetMemory(sessionId: string): Promise<{ id: string; stored_count: number }> {
    return this.request(`/sessions/${sessionId}/reset`, { method: "POST" });
  }

  getSummary(sessionId: string): Promise<SessionSummary> {
    return this.request<SessionSummary>(`/sessions/${sessionId}/summary`);
  }

  getResult(sessionId: string, index: number): Promise<ImageRecord> {
    return this.request<ImageRecord>(`/sessions/${sessionId}/results/${index}`);
  }

  /** Mid-session tuning; the service logs the override. */
  updateConfig(sessionId: string, overrides: Partial<SessionConfig>): Promise<SessionInfo> {
    return this.request<SessionInfo>(`/sessions/${sessionId}/config`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(overrides),
    });
  }
}
