/** Transcript events as streamed by the arena server (one per SSE frame). */

export type TranscriptEvent =
  | { t_ms: number; kind: "RiddleStart"; riddle_id: string; subject: string }
  | { t_ms: number; kind: "ClueStart"; clue_index: number }
  | { t_ms: number; kind: "Token"; text: string }
  | { t_ms: number; kind: "ClueEnd"; clue_index: number }
  | { t_ms: number; kind: "Buzz"; team: string; seq: number }
  | { t_ms: number; kind: "AnswerGiven"; team: string; text: string }
  | { t_ms: number; kind: "Verdict"; team: string; correct: boolean; points: number }
  | {
      t_ms: number;
      kind: "RiddleEnd";
      winner: string | null;
      answered_on_clue: number | null;
    }
  | { t_ms: number; kind: "ContestEnd"; scores: Record<string, number> }
  | { t_ms: number; kind: "Rejected"; input: string; reason: string; team?: string };

export interface MatchSnapshot {
  match_id: string;
  status: "pending" | "running" | "finished";
  clock: "virtual" | "wall";
  config: { team_ids: string[]; answer_deadline_ms: number };
  riddle_ids: string[];
  humans: string[];
  joined: string[];
  scores: Record<string, number>;
  event_count: number;
}

export interface EvalReportBody {
  n: number;
  em_pct: number;
  fm_pct: number;
  mean_latency_s: number;
  per_subject: Record<string, EvalReportBody>;
}

export interface EvalJob {
  job_id: string;
  split: string;
  mode: string;
  agent?: unknown;
  status: "running" | "finished" | "failed";
  progress: { done: number; total: number };
  report?: EvalReportBody;
  error?: string | null;
}
