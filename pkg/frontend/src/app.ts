/**
 * Dashboard wiring. The console holds no authoritative state: every panel
 * is rebuilt from API queries on a 5-second poll (or after an action), so
 * a hard refresh reconstructs everything.
 */
import { AdminApi, ApiError, type ConsoleConfig, type EngineStatus } from "./api.js";
import {
  countdown,
  errorBanner,
  leaderboardHtml,
  reportRowHtml,
  softTargetLine,
  statsPanelHtml,
} from "./views.js";

const POLL_MS = 5000;

let api: AdminApi | null = null;
let happyHourEnd: string | null = null;
let pollTimer: number | null = null;
let countdownTimer: number | null = null;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function feedback(target: string, message: string, ok = false): void {
  const box = el<HTMLElement>(target);
  box.textContent = message;
  box.className = ok ? "feedback ok" : "feedback error";
}

function clearFeedback(target: string): void {
  const box = el<HTMLElement>(target);
  box.textContent = "";
  box.className = "feedback";
}

function loadConfig(): ConsoleConfig | null {
  const raw = localStorage.getItem("console-config");
  return raw ? (JSON.parse(raw) as ConsoleConfig) : null;
}

function saveConfig(config: ConsoleConfig): void {
  localStorage.setItem("console-config", JSON.stringify(config));
}

async function refresh(): Promise<void> {
  if (!api) return;
  let status: EngineStatus;
  try {
    status = await api.status();
    clearFeedback("connection-feedback");
  } catch (error) {
    feedback("connection-feedback", errorBanner(error));
    return;
  }
  el("status-line").textContent = status.current_date
    ? `Playing ${status.idiom_id} on ${status.current_date} (balance: ${status.balance})`
    : "No day open.";
  happyHourEnd = status.happy_hour?.end ?? null;
  renderCountdown();
  if (!status.current_date) return;
  const date = status.current_date;
  try {
    const [stats, board, reports] = await Promise.all([
      api.dayStats(date),
      api.leaderboard(date),
      api.reports(),
    ]);
    el("stats-panel").innerHTML = statsPanelHtml(stats);
    el("soft-target").textContent = softTargetLine(board);
    el("leaderboard-panel").innerHTML = leaderboardHtml(board);
    const list = el<HTMLUListElement>("reports-list");
    list.innerHTML = reports.map(reportRowHtml).join("") || "<li class='muted'>Queue is empty.</li>";
    wireReportButtons(list);
  } catch (error) {
    feedback("connection-feedback", errorBanner(error));
  }
}

function renderCountdown(): void {
  const label = el("happy-hour-countdown");
  if (!happyHourEnd) {
    label.textContent = "";
    return;
  }
  const left = countdown(happyHourEnd, Date.now());
  label.textContent = left ? `happy hour ends in ${left}` : "";
  if (!left) happyHourEnd = null;
}

function wireReportButtons(list: HTMLUListElement): void {
  list.querySelectorAll<HTMLButtonElement>("button.flag").forEach((button) => {
    button.onclick = async () => {
      if (!api) return;
      try {
        await api.flagSubmission(Number(button.dataset.id), "flagged from console");
        feedback("reports-feedback", `Submission #${button.dataset.id} flagged.`, true);
      } catch (error) {
        feedback("reports-feedback", errorBanner(error));
      }
      await refresh();
    };
  });
  list.querySelectorAll<HTMLButtonElement>("button.ban").forEach((button) => {
    button.onclick = async () => {
      if (!api) return;
      try {
        await api.banPlayer(String(button.dataset.player), "banned from console");
        feedback("reports-feedback", `Player ${button.dataset.player} banned.`, true);
      } catch (error) {
        feedback("reports-feedback", errorBanner(error));
      }
      await refresh();
    };
  });
}

function wireActions(): void {
  el<HTMLFormElement>("connect-form").onsubmit = (event) => {
    event.preventDefault();
    const config = {
      baseUrl: el<HTMLInputElement>("base-url").value.replace(/\/$/, ""),
      token: el<HTMLInputElement>("token").value,
    };
    saveConfig(config);
    api = new AdminApi(config);
    void refresh();
    if (pollTimer === null) {
      pollTimer = window.setInterval(() => void refresh(), POLL_MS);
      countdownTimer = window.setInterval(renderCountdown, 1000);
    }
  };

  el<HTMLButtonElement>("happy-hour-button").onclick = async () => {
    if (!api) return;
    try {
      const window_ = await api.startHappyHour();
      happyHourEnd = window_.end;
      feedback("happy-hour-feedback", "Happy hour started!", true);
      renderCountdown();
    } catch (error) {
      feedback("happy-hour-feedback", errorBanner(error));
    }
  };

  el<HTMLFormElement>("schedule-form").onsubmit = async (event) => {
    event.preventDefault();
    if (!api) return;
    const line = el<HTMLInputElement>("pattern-line").value;
    const date = el<HTMLInputElement>("play-date").value;
    try {
      const idiom = await api.scheduleIdiom(line);
      feedback("schedule-feedback", `Scheduled ${idiom.id} (${idiom.pattern}).`, true);
      if (date) {
        await api.openDay(date, idiom.id);
        feedback("schedule-feedback", `Scheduled ${idiom.id} and opened ${date}.`, true);
      }
      await refresh();
    } catch (error) {
      feedback("schedule-feedback", errorBanner(error));
    }
  };
}

export function start(): void {
  wireActions();
  const saved = loadConfig();
  if (saved) {
    el<HTMLInputElement>("base-url").value = saved.baseUrl;
    el<HTMLInputElement>("token").value = saved.token;
    api = new AdminApi(saved);
    void refresh();
    pollTimer = window.setInterval(() => void refresh(), POLL_MS);
    countdownTimer = window.setInterval(renderCountdown, 1000);
  }
}

if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", start);
}
