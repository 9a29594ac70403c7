/**
 * DOM bootstrap: wires the session flow and ink rendering into the page.
 * All logic lives in sessionFlow/renderInk; this file only touches elements.
 */

import { RatingApi } from "./api.js";
import { InkRenderError, renderInk } from "./renderInk.js";
import { FlowState, SessionFlow } from "./sessionFlow.js";

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) {
    throw new Error(`missing element #${id}`);
  }
  return found as T;
}

function drawOn(canvasId: string, strokes: Array<Array<[number, number]>>): void {
  const canvas = el<HTMLCanvasElement>(canvasId);
  const ctx = canvas.getContext("2d");
  if (!ctx) {
    throw new InkRenderError("canvas 2d context unavailable");
  }
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.lineWidth = 2;
  ctx.lineCap = "round";
  ctx.lineJoin = "round";
  ctx.strokeStyle = "#1a2233";
  renderInk(ctx, strokes, { width: canvas.width, height: canvas.height, padding: 12 });
}

function show(id: string, visible: boolean): void {
  el(id).style.display = visible ? "" : "none";
}

function render(state: FlowState, flow: SessionFlow): void {
  show("panel-loading", state.kind === "loading" || state.kind === "submitting");
  show("panel-pair", state.kind === "pair" || state.kind === "submitting");
  show("panel-criteria", state.kind === "criteria");
  show("panel-done", state.kind === "done");
  show("panel-error", state.kind === "error");

  const buttons = ["btn-left", "btn-right", "btn-skip"].map((id) => el<HTMLButtonElement>(id));
  buttons.forEach((b) => (b.disabled = state.kind !== "pair"));

  if (state.kind === "pair") {
    el("question").textContent = state.question;
    el("prompt-label").textContent = state.view.prompt_label ?? "";
    el("remaining").textContent = `${state.view.remaining} pair(s) left`;
    try {
      drawOn("canvas-original", state.view.original);
      drawOn("canvas-left", state.view.left);
      drawOn("canvas-right", state.view.right);
    } catch (err) {
      buttons.forEach((b) => (b.disabled = true));
      show("panel-pair", false);
      show("panel-error", true);
      el("error-message").textContent = `Could not display this pair: ${String(err)}`;
      el<HTMLButtonElement>("btn-retry").style.display = "none";
      return;
    }
  }
  if (state.kind === "error") {
    el("error-message").textContent = state.message;
    el<HTMLButtonElement>("btn-retry").style.display = state.canRetry ? "" : "none";
  }
}

function boot(): void {
  const params = new URLSearchParams(window.location.search);
  const sessionId = params.get("session") ?? "default";
  const raterId = params.get("rater") ?? "";
  if (!raterId) {
    el("panel-loading").textContent = "Add ?rater=<your-id> to the URL to begin.";
    return;
  }
  const api = new RatingApi("", sessionId);
  const flow = new SessionFlow(api, raterId);
  flow.onChange((state) => render(state, flow));

  el<HTMLButtonElement>("btn-left").addEventListener("click", () => void flow.choose("left"));
  el<HTMLButtonElement>("btn-right").addEventListener("click", () => void flow.choose("right"));
  el<HTMLButtonElement>("btn-skip").addEventListener("click", () => void flow.choose("skip"));
  el<HTMLButtonElement>("btn-retry").addEventListener("click", () => void flow.retry());
  el<HTMLButtonElement>("btn-criteria").addEventListener("click", () => {
    const text = el<HTMLTextAreaElement>("criteria-text").value;
    void flow.sendCriteria(text);
  });

  void flow.start();
}

document.addEventListener("DOMContentLoaded", boot);
