/** Thin client for the arena HTTP API; all game logic stays server-side. */

import type { EvalJob, EvalReportBody, MatchSnapshot, TranscriptEvent } from "./events.js";
import { SseParser } from "./sse.js";

export interface InputAck {
  seq?: number;
  accepted?: boolean;
  reason?: string;
  deadline_ms?: number;
  joined?: boolean;
  status?: string;
}

export class ArenaClient {
  constructor(readonly baseUrl: string) {}

  private async json<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await fetch(this.baseUrl + path, {
      headers: { "content-type": "application/json" },
      ...init,
    });
    if (!resp.ok) {
      const body = await resp.text();
      throw new Error(`${init?.method ?? "GET"} ${path} -> ${resp.status}: ${body}`);
    }
    return (await resp.json()) as T;
  }

  getMatch(matchId: string): Promise<MatchSnapshot> {
    return this.json(`/matches/${matchId}`);
  }

  createMatch(body: unknown): Promise<MatchSnapshot> {
    return this.json("/matches", { method: "POST", body: JSON.stringify(body) });
  }

  private input(matchId: string, team: string, input: Record<string, unknown>): Promise<InputAck> {
    return this.json(`/matches/${matchId}/input`, {
      method: "POST",
      body: JSON.stringify({ team, input }),
    });
  }

  join(matchId: string, team: string): Promise<InputAck> {
    return this.input(matchId, team, { type: "join" });
  }

  buzz(matchId: string, team: string): Promise<InputAck> {
    return this.input(matchId, team, { type: "buzz" });
  }

  answer(matchId: string, team: string, text: string): Promise<InputAck> {
    return this.input(matchId, team, { type: "answer", text });
  }

  listEvals(): Promise<EvalJob[]> {
    return this.json("/evals");
  }

  getEval(jobId: string): Promise<EvalJob> {
    return this.json(`/evals/${jobId}`);
  }

  getReport(jobId: string): Promise<EvalReportBody> {
    return this.json(`/evals/${jobId}/report`);
  }

  /**
   * Subscribe to the match event stream. Events already seen (below
   * `fromIndex`) are skipped, so a dropped stream resumes idempotently.
   * Returns the index after the last delivered event.
   */
  async streamEvents(
    matchId: string,
    fromIndex: number,
    onEvent: (ev: TranscriptEvent, index: number) => void,
  ): Promise<number> {
    const resp = await fetch(`${this.baseUrl}/matches/${matchId}/events`);
    if (!resp.ok || !resp.body) {
      throw new Error(`event stream -> ${resp.status}`);
    }
    const reader = resp.body.getReader();
    const decoder = new TextDecoder();
    const parser = new SseParser();
    let next = fromIndex;
    for (;;) {
      const { done, value } = await reader.read();
      if (done) break;
      for (const frame of parser.push(decoder.decode(value, { stream: true }))) {
        const index = frame.id ?? next;
        if (index < fromIndex) continue; // history we already applied
        onEvent(JSON.parse(frame.data) as TranscriptEvent, index);
        next = index + 1;
      }
    }
    return next;
  }

  /**
   * Stream with automatic resubscription from the last event index after
   * drops; resolves when the contest has ended.
   */
  async followMatch(
    matchId: string,
    onEvent: (ev: TranscriptEvent, index: number) => void,
    maxRetries = 10,
  ): Promise<void> {
    let index = 0;
    let finished = false;
    const wrapped = (ev: TranscriptEvent, i: number) => {
      onEvent(ev, i);
      if (ev.kind === "ContestEnd") finished = true;
    };
    for (let attempt = 0; attempt <= maxRetries && !finished; attempt++) {
      try {
        index = await this.streamEvents(matchId, index, wrapped);
        if (finished) return;
      } catch (err) {
        if (attempt === maxRetries) throw err;
      }
      await new Promise((resolve) => setTimeout(resolve, 50 * (attempt + 1)));
    }
  }
}
