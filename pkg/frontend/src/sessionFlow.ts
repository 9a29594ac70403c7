/**
 * Rater session state machine, independent of the DOM.
 *
 * loading -> pair -> submitting -> (next pair ...) -> criteria -> done,
 * with an error state that keeps the in-flight action for retry so a
 * network failure never loses local state. While a submission is in
 * flight further choices are ignored, so a double click produces exactly
 * one record (the server additionally deduplicates).
 */

import { Choice, NextResponse, PairView, RatingApi } from "./api.js";

export const DEFAULT_QUESTION =
  "Which of the two versions is a better spelling correction? " +
  "If you had a system that would be able to replace the original ink " +
  "with a corrected version, which one would you prefer?";

export type FlowState =
  | { kind: "loading" }
  | { kind: "pair"; view: PairView; question: string }
  | { kind: "submitting"; view: PairView }
  | { kind: "criteria" }
  | { kind: "done" }
  | { kind: "error"; message: string; canRetry: boolean };

export interface FlowOptions {
  question?: string;
}

type Listener = (state: FlowState) => void;

export class SessionFlow {
  private state: FlowState = { kind: "loading" };
  private listeners: Listener[] = [];
  private retryAction: (() => Promise<void>) | null = null;
  private readonly question: string;

  constructor(
    private readonly api: RatingApi,
    private readonly raterId: string,
    options: FlowOptions = {},
  ) {
    this.question = options.question ?? DEFAULT_QUESTION;
  }

  get current(): FlowState {
    return this.state;
  }

  onChange(listener: Listener): void {
    this.listeners.push(listener);
  }

  private setState(state: FlowState): void {
    this.state = state;
    for (const listener of this.listeners) {
      listener(state);
    }
  }

  private fail(message: string, retry: (() => Promise<void>) | null): void {
    this.retryAction = retry;
    this.setState({ kind: "error", message, canRetry: retry !== null });
  }

  async start(): Promise<void> {
    this.setState({ kind: "loading" });
    await this.advance();
  }

  private async advance(): Promise<void> {
    let resp: NextResponse;
    try {
      resp = await this.api.next(this.raterId);
    } catch (err) {
      this.fail(String(err), () => this.advance());
      return;
    }
    if (resp.done) {
      this.setState(resp.criteria_submitted ? { kind: "done" } : { kind: "criteria" });
      return;
    }
    this.setState({ kind: "pair", view: resp, question: this.question });
  }

  /** Submit the rater's choice for the current pair; ignored unless a pair
   * is showing. */
  async choose(choice: Choice): Promise<void> {
    if (this.state.kind !== "pair") {
      return;
    }
    const view = this.state.view;
    this.setState({ kind: "submitting", view });
    await this.submit(view, choice);
  }

  private async submit(view: PairView, choice: Choice): Promise<void> {
    try {
      await this.api.submitChoice(view.pair_id, choice, this.raterId);
    } catch (err) {
      this.fail(String(err), () => this.submit(view, choice));
      return;
    }
    await this.advance();
  }

  async sendCriteria(text: string): Promise<void> {
    if (this.state.kind !== "criteria") {
      return;
    }
    await this.postCriteria(text);
  }

  private async postCriteria(text: string): Promise<void> {
    try {
      await this.api.submitCriteria(this.raterId, text);
    } catch (err) {
      this.fail(String(err), () => this.postCriteria(text));
      return;
    }
    this.setState({ kind: "done" });
  }

  async retry(): Promise<void> {
    if (this.state.kind !== "error" || !this.retryAction) {
      return;
    }
    const action = this.retryAction;
    this.retryAction = null;
    this.setState({ kind: "loading" });
    await action();
  }
}
