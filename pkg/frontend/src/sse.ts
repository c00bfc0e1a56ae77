/** Incremental server-sent-events parser for the match event stream. */

export interface SseFrame {
  id: number | null;
  data: string;
}

/**
 * Feed arbitrary text chunks; complete `id:`/`data:` frames come out.
 * The server frames one JSON event per `data:` line.
 */
export class SseParser {
  private buffer = "";

  push(chunk: string): SseFrame[] {
    this.buffer += chunk;
    const frames: SseFrame[] = [];
    let sep = this.buffer.indexOf("\n\n");
    while (sep >= 0) {
      const block = this.buffer.slice(0, sep);
      this.buffer = this.buffer.slice(sep + 2);
      const frame = parseBlock(block);
      if (frame) frames.push(frame);
      sep = this.buffer.indexOf("\n\n");
    }
    return frames;
  }
}

function parseBlock(block: string): SseFrame | null {
  let id: number | null = null;
  const data: string[] = [];
  for (const line of block.split("\n")) {
    if (line.startsWith("id:")) {
      const parsed = Number(line.slice(3).trim());
      id = Number.isNaN(parsed) ? null : parsed;
    } else if (line.startsWith("data:")) {
      data.push(line.slice(5).trimStart());
    }
  }
  if (data.length === 0) return null;
  return { id, data: data.join("\n") };
}
