/** Report table rows, mirroring the server's EvalReport verbatim. */

import type { EvalJob, EvalReportBody } from "./events.js";

export interface ReportRow {
  label: string;
  n: number;
  em: string; // "23.14%" — server value formatted, never recomputed
  fm: string;
  meanLatency: string;
}

function pct(value: number): string {
  return `${value.toFixed(2)}%`;
}

export function reportRows(label: string, report: EvalReportBody): ReportRow[] {
  const rows: ReportRow[] = [
    {
      label,
      n: report.n,
      em: pct(report.em_pct),
      fm: pct(report.fm_pct),
      meanLatency: `${report.mean_latency_s.toFixed(3)}s`,
    },
  ];
  for (const [subject, sub] of Object.entries(report.per_subject ?? {})) {
    rows.push({
      label: `${label} / ${subject}`,
      n: sub.n,
      em: pct(sub.em_pct),
      fm: pct(sub.fm_pct),
      meanLatency: `${sub.mean_latency_s.toFixed(3)}s`,
    });
  }
  return rows;
}

export function jobSummary(job: EvalJob): string {
  if (job.status === "finished") {
    return `${job.job_id} [${job.split}/${job.mode}] finished`;
  }
  if (job.status === "failed") {
    return `${job.job_id} [${job.split}/${job.mode}] failed after ${job.progress.done}/${job.progress.total}: ${job.error ?? "unknown error"}`;
  }
  return `${job.job_id} [${job.split}/${job.mode}] running ${job.progress.done}/${job.progress.total}`;
}
