/**
 * Event-sourced view state for a live match.
 *
 * The rendered state is a pure fold over the received event prefix (plus
 * the viewer's pending input); the client never computes points or
 * verdicts itself. Scoreboard numbers come only from server Verdict
 * events and are overwritten verbatim by ContestEnd.
 */

import type { TranscriptEvent } from "./events.js";

export type BuzzButtonState =
  | { state: "armed" }
  | { state: "locked_out" }
  | { state: "awaiting_answer"; deadlineMs: number }
  | { state: "blocked" }; // spectator, another team answering, or match over

export type PhaseIndicator =
  | "idle"
  | "streaming"
  | "awaiting_answer"
  | "riddle_done"
  | "contest_done";

export interface LiveMatchView {
  matchId: string;
  myTeam: string | null;
  answerDeadlineMs: number;
  phase: PhaseIndicator;
  riddleId: string | null;
  subject: string | null;
  clueIndex: number;
  revealedTokens: string[];
  scoreboard: Record<string, number>;
  buzz: BuzzButtonState;
  answeringTeam: string | null;
  lastVerdict: { team: string; correct: boolean; points: number } | null;
  inlineReason: string | null;
  pendingBuzz: boolean;
  eventIndex: number; // events applied so far (resume point for the stream)
  finished: boolean;
}

export function initialView(
  matchId: string,
  teamIds: string[],
  myTeam: string | null,
  answerDeadlineMs = 5000,
): LiveMatchView {
  const scoreboard: Record<string, number> = {};
  for (const team of teamIds) scoreboard[team] = 0;
  return {
    matchId,
    myTeam,
    answerDeadlineMs,
    phase: "idle",
    riddleId: null,
    subject: null,
    clueIndex: 0,
    revealedTokens: [],
    scoreboard,
    buzz: myTeam ? { state: "armed" } : { state: "blocked" },
    answeringTeam: null,
    lastVerdict: null,
    inlineReason: null,
    pendingBuzz: false,
    eventIndex: 0,
    finished: false,
  };
}

function rearm(view: LiveMatchView, lockedOut: Set<string>): BuzzButtonState {
  if (!view.myTeam) return { state: "blocked" };
  if (lockedOut.has(view.myTeam)) return { state: "locked_out" };
  return { state: "armed" };
}

/** Folds transcript events into LiveMatchView; tracks per-riddle lockouts. */
export class MatchProjection {
  view: LiveMatchView;
  private lockedOut = new Set<string>();

  constructor(view: LiveMatchView) {
    this.view = view;
  }

  apply(ev: TranscriptEvent): LiveMatchView {
    const v = { ...this.view };
    switch (ev.kind) {
      case "RiddleStart":
        this.lockedOut.clear();
        v.phase = "streaming";
        v.riddleId = ev.riddle_id;
        v.subject = ev.subject;
        v.clueIndex = 0;
        v.revealedTokens = [];
        v.answeringTeam = null;
        v.lastVerdict = null;
        v.buzz = rearm(v, this.lockedOut);
        break;
      case "ClueStart":
        v.clueIndex = ev.clue_index;
        v.revealedTokens = [];
        break;
      case "Token":
        v.revealedTokens = [...v.revealedTokens, ev.text];
        break;
      case "ClueEnd":
        break;
      case "Buzz":
        v.phase = "awaiting_answer";
        v.answeringTeam = ev.team;
        if (ev.team === v.myTeam) {
          v.buzz = { state: "awaiting_answer", deadlineMs: v.answerDeadlineMs };
          v.pendingBuzz = false;
        } else if (v.myTeam) {
          v.buzz = { state: "blocked" };
        }
        break;
      case "AnswerGiven":
        break;
      case "Verdict":
        v.lastVerdict = { team: ev.team, correct: ev.correct, points: ev.points };
        if (ev.correct) {
          // points are server-computed; the client only accumulates them
          v.scoreboard = {
            ...v.scoreboard,
            [ev.team]: (v.scoreboard[ev.team] ?? 0) + ev.points,
          };
        } else {
          this.lockedOut.add(ev.team);
          v.phase = "streaming";
          v.answeringTeam = null;
          v.buzz = rearm(v, this.lockedOut);
        }
        break;
      case "RiddleEnd":
        v.phase = "riddle_done";
        v.answeringTeam = null;
        break;
      case "ContestEnd":
        v.phase = "contest_done";
        v.finished = true;
        v.scoreboard = { ...ev.scores }; // authoritative totals, verbatim
        if (v.myTeam) v.buzz = { state: "blocked" };
        break;
      case "Rejected":
        if (ev.team && ev.team === v.myTeam) {
          v.inlineReason = ev.reason;
          v.pendingBuzz = false;
          if (ev.reason === "locked_out") v.buzz = { state: "locked_out" };
        }
        break;
    }
    v.eventIndex = this.view.eventIndex + 1;
    this.view = v;
    return v;
  }
}

/** Fold a recorded event stream into its final view (offline replay). */
export function replayView(
  matchId: string,
  teamIds: string[],
  myTeam: string | null,
  events: TranscriptEvent[],
  answerDeadlineMs = 5000,
): LiveMatchView {
  const projection = new MatchProjection(
    initialView(matchId, teamIds, myTeam, answerDeadlineMs),
  );
  for (const ev of events) projection.apply(ev);
  return projection.view;
}
