/** DOM rendering: a pure projection of LiveMatchView into elements. */

import type { LiveMatchView } from "./matchView.js";
import type { ReportRow } from "./reportView.js";

export interface MatchElements {
  ticker: HTMLElement;
  clueLabel: HTMLElement;
  scoreboard: HTMLElement;
  phase: HTMLElement;
  buzzButton: HTMLButtonElement;
  answerBox: HTMLElement;
  answerInput: HTMLInputElement;
  countdown: HTMLElement;
  reason: HTMLElement;
}

export function renderMatch(view: LiveMatchView, el: MatchElements, nowMs: number, buzzAtMs: number): void {
  el.clueLabel.textContent = view.riddleId
    ? `${view.subject} — clue ${view.clueIndex}`
    : "waiting for the first riddle";
  el.ticker.textContent = view.revealedTokens.join(" ");
  el.phase.textContent = view.phase;

  const rows = Object.entries(view.scoreboard)
    .sort(([, a], [, b]) => b - a)
    .map(([team, points]) => `<li${team === view.myTeam ? ' class="me"' : ""}>${team}: ${points}</li>`);
  el.scoreboard.innerHTML = `<ul>${rows.join("")}</ul>`;

  if (!view.myTeam) {
    el.buzzButton.style.display = "none"; // spectators get no buzzer
    el.answerBox.style.display = "none";
  } else {
    el.buzzButton.style.display = "";
    const buzz = view.buzz;
    el.buzzButton.disabled = buzz.state !== "armed" || view.pendingBuzz;
    el.buzzButton.textContent =
      buzz.state === "locked_out" ? "locked out" : view.pendingBuzz ? "…" : "buzz";
    if (buzz.state === "awaiting_answer") {
      el.answerBox.style.display = "";
      const remaining = Math.max(0, buzz.deadlineMs - (nowMs - buzzAtMs));
      el.countdown.textContent = `${(remaining / 1000).toFixed(1)}s`;
    } else {
      el.answerBox.style.display = "none";
    }
  }
  el.reason.textContent = view.inlineReason ?? "";
}

export function renderReportTable(rows: ReportRow[]): string {
  const body = rows
    .map(
      (r) =>
        `<tr><td>${r.label}</td><td>${r.n}</td><td>${r.em}</td><td>${r.fm}</td><td>${r.meanLatency}</td></tr>`,
    )
    .join("");
  return `<table><thead><tr><th>Model</th><th>n</th><th>Exact Match</th><th>Fuzzy Match</th><th>Mean latency</th></tr></thead><tbody>${body}</tbody></table>`;
}
