/**
 * Pure view helpers: API payloads in, display strings / HTML out.
 * Kept DOM-free so they are unit-testable in node.
 */
import type { ApiError } from "./api.js";
import type { DayStats, Leaderboard, ReportedSubmission } from "./api.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** "MM:SS" until endIso, or null once the window has passed. */
export function countdown(endIso: string, nowMs: number): string | null {
  const remaining = Math.floor((Date.parse(endIso) - nowMs) / 1000);
  if (remaining <= 0) return null;
  const minutes = Math.floor(remaining / 60);
  const seconds = remaining % 60;
  return `${String(minutes).padStart(2, "0")}:${String(seconds).padStart(2, "0")}`;
}

export interface TypeShare {
  type: "A" | "B" | "C" | "D";
  count: number;
  pct: number;
}

export function typeShares(stats: DayStats): TypeShare[] {
  const types: Array<"A" | "B" | "C" | "D"> = ["A", "B", "C", "D"];
  return types.map((type) => ({
    type,
    count: stats.type_counts[type],
    pct: stats.total > 0 ? Math.round((1000 * stats.type_counts[type]) / stats.total) / 10 : 0,
  }));
}

export function softTargetLine(board: Leaderboard): string {
  if (board.soft_target_remaining === null) {
    return `Daily goal reached (${board.submission_count} submissions).`;
  }
  return `${board.soft_target_remaining} submissions remaining to the daily goal (${board.submission_count} so far).`;
}

export function statsPanelHtml(stats: DayStats): string {
  const rows = typeShares(stats)
    .map(
      (share) =>
        `<tr><td>${share.type}</td><td>${share.count}</td><td>${share.pct.toFixed(1)}%</td></tr>`,
    )
    .join("");
  return `
    <table class="stats">
      <tr><th>type</th><th>count</th><th>share</th></tr>
      ${rows}
    </table>
    <p>total <strong>${stats.total}</strong>
       (idiomatic ${stats.idiomatic_count} / literal ${stats.nonidiomatic_count}),
       avg reviews ${stats.avg_reviews_per_submission.toFixed(2)},
       dislikes ${stats.dislike_pct.toFixed(1)}%</p>`;
}

export function leaderboardHtml(board: Leaderboard): string {
  if (board.entries.length === 0) {
    return `<p class="muted">No points yet today.</p>`;
  }
  const rows = board.entries
    .map(
      (entry) =>
        `<tr><td>${entry.rank}</td><td>${escapeHtml(entry.name)}</td><td>${entry.points}</td></tr>`,
    )
    .join("");
  return `<table class="board"><tr><th>#</th><th>player</th><th>points</th></tr>${rows}</table>`;
}

export function reportRowHtml(submission: ReportedSubmission): string {
  const badges: string[] = [];
  if (submission.reports > 0) badges.push(`${submission.reports} report(s)`);
  if (submission.near_duplicate_of !== null)
    badges.push(`near-duplicate of #${submission.near_duplicate_of}`);
  if (submission.moderator_flagged) badges.push("flagged by moderator");
  return `
    <li data-id="${submission.id}" data-author="${escapeHtml(submission.author)}">
      <blockquote>${escapeHtml(submission.text)}</blockquote>
      <span class="meta">#${submission.id} by ${escapeHtml(submission.author)} -
        ${submission.sample_type}-type, ${submission.likes} likes / ${submission.dislikes} dislikes
        - ${badges.join(", ") || "clean"}</span>
      <button class="flag" data-id="${submission.id}">Flag</button>
      <button class="ban" data-player="${escapeHtml(submission.author)}">Ban author</button>
    </li>`;
}

/** Inline operator feedback for a failed action. */
export function errorBanner(error: unknown): string {
  const err = error as Partial<ApiError> & { message?: string };
  if (typeof err.status === "number" && typeof err.detail === "string") {
    return `API ${err.status}: ${err.detail}`;
  }
  return err.message ?? String(error);
}
