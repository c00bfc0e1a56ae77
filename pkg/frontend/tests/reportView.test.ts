import { describe, expect, it } from "vitest";

import type { EvalJob, EvalReportBody } from "../src/events.js";
import { jobSummary, reportRows } from "../src/reportView.js";

const report: EvalReportBody = {
  n: 229,
  em_pct: 23.14,
  fm_pct: 35.81,
  mean_latency_s: 1.2345,
  per_subject: {
    Physics: { n: 60, em_pct: 25.0, fm_pct: 40.0, mean_latency_s: 1.1, per_subject: {} },
  },
};

describe("report view", () => {
  it("renders the server percentages verbatim", () => {
    const rows = reportRows("answerer", report);
    expect(rows[0]).toEqual({
      label: "answerer",
      n: 229,
      em: "23.14%",
      fm: "35.81%",
      meanLatency: "1.234s",
    });
    expect(rows[1]?.label).toBe("answerer / Physics");
    expect(rows[1]?.em).toBe("25.00%");
  });

  it("summarizes running and failed jobs with progress", () => {
    const running: EvalJob = {
      job_id: "j1",
      split: "test",
      mode: "batch",
      status: "running",
      progress: { done: 3, total: 229 },
    };
    expect(jobSummary(running)).toContain("running 3/229");
    const failed: EvalJob = { ...running, status: "failed", error: "remote unreachable", progress: { done: 5, total: 229 } };
    expect(jobSummary(failed)).toContain("failed after 5/229");
    expect(jobSummary(failed)).toContain("remote unreachable");
  });
});
