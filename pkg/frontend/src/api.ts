/**
 * Typed client for the rating-service endpoints.
 *
 * The client never learns model identities: pairs arrive as opaque
 * left/right sides and submissions reference only pair ids. fetch is
 * injected so tests can run without a browser or network.
 */

export type Polyline = Array<[number, number]>;

export interface PairView {
  done: false;
  pair_id: string;
  prompt_label: string | null;
  original: Polyline[];
  left: Polyline[];
  right: Polyline[];
  remaining: number;
}

export interface SessionDone {
  done: true;
  criteria_submitted: boolean;
}

export type NextResponse = PairView | SessionDone;

export type Choice = "left" | "right" | "skip";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    message: string,
    readonly status: number | null = null,
  ) {
    super(message);
  }
}

export class RatingApi {
  constructor(
    private readonly baseUrl: string,
    private readonly sessionId: string,
    private readonly fetchFn: FetchLike = (...args) => fetch(...args),
  ) {}

  private url(path: string): string {
    return `${this.baseUrl}/api/session/${encodeURIComponent(this.sessionId)}${path}`;
  }

  private async request<T>(url: string, init?: RequestInit): Promise<T> {
    let resp: Response;
    try {
      resp = await this.fetchFn(url, init);
    } catch (err) {
      throw new ApiError(`network failure: ${String(err)}`);
    }
    if (!resp.ok) {
      throw new ApiError(`request failed with HTTP ${resp.status}`, resp.status);
    }
    try {
      return (await resp.json()) as T;
    } catch (err) {
      throw new ApiError(`malformed response: ${String(err)}`);
    }
  }

  async next(raterId: string): Promise<NextResponse> {
    return this.request<NextResponse>(
      this.url(`/next?rater=${encodeURIComponent(raterId)}`),
    );
  }

  async submitChoice(pairId: string, choice: Choice, raterId: string): Promise<void> {
    await this.request(this.url("/preference"), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ pair_id: pairId, choice, rater_id: raterId }),
    });
  }

  async submitCriteria(raterId: string, text: string): Promise<void> {
    await this.request(this.url("/criteria"), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ rater_id: raterId, text }),
    });
  }
}
