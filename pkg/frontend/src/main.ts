/** Browser entry point: join a match and play, or browse eval reports. */

import { ArenaClient } from "./api.js";
import { initialView, MatchProjection } from "./matchView.js";
import { jobSummary, reportRows } from "./reportView.js";
import { renderMatch, renderReportTable, type MatchElements } from "./ui.js";

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing element #${id}`);
  return found as T;
}

async function playMatch(client: ArenaClient, matchId: string, team: string | null): Promise<void> {
  const snapshot = await client.getMatch(matchId);
  const elements: MatchElements = {
    ticker: el("ticker"),
    clueLabel: el("clue-label"),
    scoreboard: el("scoreboard"),
    phase: el("phase"),
    buzzButton: el<HTMLButtonElement>("buzz"),
    answerBox: el("answer-box"),
    answerInput: el<HTMLInputElement>("answer-input"),
    countdown: el("countdown"),
    reason: el("reason"),
  };

  const projection = new MatchProjection(
    initialView(matchId, snapshot.config.team_ids, team, snapshot.config.answer_deadline_ms),
  );
  let buzzAt = performance.now();
  const paint = () => renderMatch(projection.view, elements, performance.now(), buzzAt);
  setInterval(paint, 100); // countdown refresh only; state changes repaint below

  if (team && snapshot.humans.includes(team)) {
    await client.join(matchId, team);
  }

  elements.buzzButton.onclick = async () => {
    projection.view = { ...projection.view, pendingBuzz: true };
    paint();
    const ack = await client.buzz(matchId, team ?? "");
    if (ack.accepted) buzzAt = performance.now();
    else projection.view = { ...projection.view, pendingBuzz: false, inlineReason: ack.reason ?? null };
    paint();
  };
  elements.answerInput.onkeydown = async (key) => {
    if (key.key !== "Enter") return;
    const text = elements.answerInput.value;
    elements.answerInput.value = "";
    await client.answer(matchId, team ?? "", text);
  };

  await client.followMatch(matchId, (ev) => {
    projection.apply(ev);
    paint();
  });
}

async function browseReports(client: ArenaClient, jobIds?: string[]): Promise<void> {
  const host = el("reports");
  const ids = jobIds?.length ? jobIds : (await client.listEvals()).map((j) => j.job_id);
  const parts: string[] = [];
  for (const jobId of ids) {
    const job = await client.getEval(jobId);
    parts.push(`<p>${jobSummary(job)}</p>`);
    if (job.status === "finished" && job.report) {
      parts.push(renderReportTable(reportRows(job.agent ? String(job.agent) : job.job_id, job.report)));
    }
  }
  host.innerHTML = parts.join("") || "<p>no eval jobs yet</p>";
}

declare global {
  interface Window {
    arena: { play: typeof playMatch; reports: typeof browseReports; client: (base: string) => ArenaClient };
  }
}

window.arena = {
  play: playMatch,
  reports: browseReports,
  client: (base: string) => new ArenaClient(base),
};
