/**
 * Typed client for the idiomforge admin API.
 *
 * Every dashboard action goes through this module, so the e2e tests can
 * drive exactly what the buttons drive. Errors become ApiError with the
 * HTTP status and the server's detail message, which the panels surface
 * as inline operator feedback.
 */

export interface ConsoleConfig {
  baseUrl: string;
  token: string;
}

export interface DayStats {
  date: string;
  idiom_id: string;
  idiomatic_count: number;
  nonidiomatic_count: number;
  total: number;
  avg_reviews_per_submission: number;
  dislike_pct: number;
  type_counts: Record<"A" | "B" | "C" | "D", number>;
  review_histogram: Record<string, number>;
  hourly_interactions: number[];
}

export interface ReportedSubmission {
  id: number;
  date: string;
  author: string;
  text: string;
  sample_type: string;
  idiomatic: boolean;
  likes: number;
  dislikes: number;
  reports: number;
  status: string;
  near_duplicate_of: number | null;
  moderator_flagged: boolean;
}

export interface LeaderboardEntry {
  rank: number;
  player_id: string;
  name: string;
  points: number;
}

export interface Leaderboard {
  date: string;
  entries: LeaderboardEntry[];
  submission_count: number;
  soft_target_remaining: number | null;
}

export interface EngineStatus {
  language: string;
  current_date: string | null;
  idiom_id: string | null;
  balance: string | null;
  submission_count: number;
  happy_hour: { start: string; end: string } | null;
  now: string;
}

export interface ScheduledIdiom {
  id: string;
  pattern: string;
  gloss: string;
  literal_gloss: string;
}

export interface HappyHourWindow {
  start: string;
  end: string;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(`${status}: ${detail}`);
  }
}

export class AdminApi {
  constructor(private readonly config: ConsoleConfig) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await fetch(`${this.config.baseUrl}${path}`, {
      method,
      headers: {
        Authorization: `Bearer ${this.config.token}`,
        ...(body !== undefined ? { "Content-Type": "application/json" } : {}),
      },
      body: body !== undefined ? JSON.stringify(body) : undefined,
    });
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const payload = (await response.json()) as { detail?: unknown };
        if (typeof payload.detail === "string") detail = payload.detail;
        else if (payload.detail !== undefined) detail = JSON.stringify(payload.detail);
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  status(): Promise<EngineStatus> {
    return this.request("GET", "/api/status");
  }

  dayStats(date: string): Promise<DayStats> {
    return this.request("GET", `/api/days/${date}/stats`);
  }

  reports(): Promise<ReportedSubmission[]> {
    return this.request("GET", "/api/reports");
  }

  scheduleIdiom(line: string): Promise<ScheduledIdiom> {
    return this.request("POST", "/api/idioms", { line });
  }

  listIdioms(): Promise<ScheduledIdiom[]> {
    return this.request("GET", "/api/idioms");
  }

  openDay(date: string, idiomId: string): Promise<{ date: string; idiom_id: string }> {
    return this.request("POST", `/api/days/${date}/open`, { idiom_id: idiomId });
  }

  startHappyHour(): Promise<HappyHourWindow> {
    return this.request("POST", "/api/happy-hour");
  }

  flagSubmission(id: number, reason: string): Promise<{ submission_id: number }> {
    return this.request("POST", `/api/submissions/${id}/flag`, { reason });
  }

  banPlayer(playerId: string, reason: string): Promise<{ player_id: string }> {
    return this.request("POST", `/api/players/${playerId}/ban`, { reason });
  }

  unbanPlayer(playerId: string): Promise<{ player_id: string }> {
    return this.request("POST", `/api/players/${playerId}/unban`);
  }

  leaderboard(date: string): Promise<Leaderboard> {
    return this.request("GET", `/api/leaderboard/${date}`);
  }

  /** Demo-mode only: make a seeded player review something (test harness). */
  demoReview(): Promise<{ reviewer: string; submission_id: number; points: number }> {
    return this.request("POST", "/api/demo/review");
  }
}
