import { describe, expect, it, vi } from "vitest";

import { ServiceError, type FeedbackResponse, type TunerClient } from "../src/api.js";
import { createFeedbackController } from "../src/feedback.js";
import { renderPolicy } from "../src/render.js";
import { threeSites } from "./fixtures.js";

function feedbackPayload(siteId: string): FeedbackResponse {
  return {
    schema_version: 1,
    website_id: siteId,
    old_c: 2,
    new_c: 4,
    result: { ...threeSites, value: 10.0 },
  };
}

function clientWith(feedback: TunerClient["feedback"]): TunerClient {
  return { feedback } as unknown as TunerClient;
}

describe("createFeedbackController", () => {
  it("applies a feedback response and marks the changed row", async () => {
    const client = clientWith(async (_s, wid) => feedbackPayload(wid));
    const initial = renderPolicy(threeSites).state;
    const controller = createFeedbackController(client, "s1", initial);
    const state = await controller.submit("w1", "Degraded");
    expect(state.gameValue).toBe(10.0);
    expect(state.rows.find((r) => r.id === "w1")?.changed).toBe(true);
    expect(state.rows.find((r) => r.id === "w1")?.lastFeedback).toBe("Degraded");
    expect(state.pending).toBe(false);
  });

  it("sends a single request on a rapid double-click", async () => {
    let release!: (value: FeedbackResponse) => void;
    const gate = new Promise<FeedbackResponse>((resolve) => (release = resolve));
    const feedback = vi.fn(() => gate);
    const controller = createFeedbackController(
      clientWith(feedback as unknown as TunerClient["feedback"]),
      "s1",
      renderPolicy(threeSites).state,
    );
    const first = controller.submit("w1", "Degraded");
    const second = controller.submit("w1", "Degraded");
    release(feedbackPayload("w1"));
    await Promise.all([first, second]);
    expect(feedback).toHaveBeenCalledTimes(1);
  });

  it("shows a toast when the service reports a concurrent solve", async () => {
    const client = clientWith(async () => {
      throw new ServiceError(409, "solve in progress");
    });
    const controller = createFeedbackController(client, "s1", renderPolicy(threeSites).state);
    const state = await controller.submit("w2", "Acceptable");
    expect(state.toast).toBe("solve in progress");
    expect(state.errorBanner).toBeNull();
    expect(state.pending).toBe(false);
  });

  it("keeps the stale table and raises a banner when the service is unreachable", async () => {
    const client = clientWith(async () => {
      throw new ServiceError(0, "service unreachable: fetch failed");
    });
    const initial = renderPolicy(threeSites).state;
    const controller = createFeedbackController(client, "s1", initial);
    const state = await controller.submit("w2", "Acceptable");
    expect(state.errorBanner).toContain("service unreachable");
    expect(state.rows).toEqual(initial.rows);
    expect(state.pending).toBe(false);
  });

  it("accepts new submissions after a failure clears the in-flight flag", async () => {
    let calls = 0;
    const client = clientWith(async (_s, wid) => {
      calls += 1;
      if (calls === 1) throw new ServiceError(409, "solve in progress");
      return feedbackPayload(wid);
    });
    const controller = createFeedbackController(client, "s1", renderPolicy(threeSites).state);
    await controller.submit("w1", "Degraded");
    const state = await controller.submit("w1", "Degraded");
    expect(calls).toBe(2);
    expect(state.toast).toBeNull();
    expect(state.gameValue).toBe(10.0);
  });
});
