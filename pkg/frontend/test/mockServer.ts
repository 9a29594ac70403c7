/**
 * In-memory stand-in for the rating service, faithful to its wire contract:
 * blind left/right payloads, seed-deterministic side order, one submission
 * per (rater, pair), CSV export of accepted records.
 */

import type { FetchLike, Polyline } from "../src/api.js";

export interface MockPair {
  pairId: string;
  sampleId: string;
  leftModel: string;
  rightModel: string;
}

interface MockRecord {
  sampleId: string;
  leftModel: string;
  rightModel: string;
  choice: string;
  raterId: string;
}

// deterministic tiny PRNG so side order is reproducible per seed
function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

const GLYPH: Polyline = [
  [0, 0],
  [2, 5],
  [4, 0],
  [1, 3],
  [3, 3],
];

export class MockRatingServer {
  readonly pairs: MockPair[];
  private answered = new Set<string>();
  private records: MockRecord[] = [];
  private criteria = new Map<string, string>();
  readonly requests: Array<{ url: string; body: string | null }> = [];

  constructor(
    readonly sessionId: string,
    nPairs: number,
    seed: number,
    private readonly models: [string, string] = ["model-one", "model-two"],
  ) {
    const rand = mulberry32(seed);
    this.pairs = [];
    for (let i = 0; i < nPairs; i++) {
      const flip = rand() < 0.5;
      this.pairs.push({
        pairId: `${sessionId}-${String(i).padStart(4, "0")}`,
        sampleId: `s${i}`,
        leftModel: flip ? this.models[1] : this.models[0],
        rightModel: flip ? this.models[0] : this.models[1],
      });
    }
  }

  sideOrder(): string[] {
    return this.pairs.map((p) => p.leftModel);
  }

  exportCsv(): string {
    const lines = ["sample_id,left_model,right_model,choice,rater_id,timestamp"];
    for (const r of this.records) {
      lines.push(
        `${r.sampleId},${r.leftModel},${r.rightModel},${r.choice},${r.raterId},2024-01-01T00:00:00+00:00`,
      );
    }
    return lines.join("\n") + "\n";
  }

  get recordCount(): number {
    return this.records.length;
  }

  fetch: FetchLike = async (url, init) => {
    const body = init?.body ? String(init.body) : null;
    this.requests.push({ url, body });
    const prefix = `/api/session/${this.sessionId}`;
    if (!url.startsWith(prefix)) {
      return json(404, { detail: "unknown session" });
    }
    const path = url.slice(prefix.length);

    if (path.startsWith("/next")) {
      const rater = new URL(`http://x${url}`).searchParams.get("rater") ?? "";
      const pending = this.pairs.find((p) => !this.answered.has(`${rater}:${p.pairId}`));
      if (!pending) {
        return json(200, { done: true, criteria_submitted: this.criteria.has(rater) });
      }
      const remaining = this.pairs.filter(
        (p) => !this.answered.has(`${rater}:${p.pairId}`),
      ).length;
      return json(200, {
        done: false,
        pair_id: pending.pairId,
        prompt_label: "corrected text",
        original: [GLYPH],
        left: [GLYPH.map(([x, y]) => [x + 1, y] as [number, number])],
        right: [GLYPH.map(([x, y]) => [x + 2, y] as [number, number])],
        remaining,
      });
    }

    if (path === "/preference") {
      const parsed = JSON.parse(body ?? "{}");
      const pair = this.pairs.find((p) => p.pairId === parsed.pair_id);
      if (!pair) {
        return json(404, { detail: "unknown pair" });
      }
      const key = `${parsed.rater_id}:${parsed.pair_id}`;
      if (this.answered.has(key)) {
        return json(409, { detail: "already answered" });
      }
      this.answered.add(key);
      this.records.push({
        sampleId: pair.sampleId,
        leftModel: pair.leftModel,
        rightModel: pair.rightModel,
        choice: parsed.choice,
        raterId: parsed.rater_id,
      });
      return json(200, { accepted: true, record_index: this.records.length - 1 });
    }

    if (path === "/criteria") {
      const parsed = JSON.parse(body ?? "{}");
      this.criteria.set(parsed.rater_id, parsed.text);
      return json(200, { accepted: true });
    }

    return json(404, { detail: "no such endpoint" });
  };
}

function json(status: number, payload: unknown): Response {
  return new Response(JSON.stringify(payload), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}
