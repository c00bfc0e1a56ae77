import { describe, expect, it } from "vitest";

import { SseParser } from "../src/sse.js";

describe("sse parser", () => {
  it("parses id/data frames", () => {
    const parser = new SseParser();
    const frames = parser.push('id: 0\ndata: {"kind":"Token"}\n\nid: 1\ndata: {"kind":"ClueEnd"}\n\n');
    expect(frames).toEqual([
      { id: 0, data: '{"kind":"Token"}' },
      { id: 1, data: '{"kind":"ClueEnd"}' },
    ]);
  });

  it("survives arbitrary chunk boundaries", () => {
    const whole = 'id: 3\ndata: {"a":1}\n\nid: 4\ndata: {"b":2}\n\n';
    for (let cut = 1; cut < whole.length - 1; cut++) {
      const parser = new SseParser();
      const frames = [...parser.push(whole.slice(0, cut)), ...parser.push(whole.slice(cut))];
      expect(frames.map((f) => f.id)).toEqual([3, 4]);
    }
  });

  it("holds incomplete frames until terminated", () => {
    const parser = new SseParser();
    expect(parser.push("data: {\"x\"")).toEqual([]);
    expect(parser.push(":1}\n")).toEqual([]);
    expect(parser.push("\n")).toEqual([{ id: null, data: '{"x":1}' }]);
  });

  it("ignores blocks without data", () => {
    const parser = new SseParser();
    expect(parser.push(": keepalive\n\n")).toEqual([]);
  });
});
