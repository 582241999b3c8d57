/** Feedback submission with a client-side in-flight guard: at most one
 * mutation at a time, optimistic row disable, 409 surfaced as a toast. */

import { ServiceError, type FeedbackResponse, type TunerClient } from "./api.js";
import { applyFeedback, applyError, type PanelState, type Verdict } from "./state.js";

export interface FeedbackController {
  submit(siteId: string, verdict: Verdict): Promise<PanelState>;
  state(): PanelState;
}

export function createFeedbackController(
  client: TunerClient,
  sessionId: string,
  initial: PanelState,
): FeedbackController {
  let state = initial;
  const log = new Map<string, Verdict>();

  return {
    state: () => state,
    async submit(siteId: string, verdict: Verdict): Promise<PanelState> {
      if (state.pending) {
        // Rapid double-click: the guard swallows the second request.
        return state;
      }
      state = { ...state, pending: true, toast: null };
      try {
        const response: FeedbackResponse = await client.feedback(
          sessionId,
          siteId,
          verdict,
        );
        log.set(siteId, verdict);
        state = { ...applyFeedback(state, response, log), pending: false };
      } catch (err) {
        if (err instanceof ServiceError && err.status === 409) {
          state = { ...state, pending: false, toast: "solve in progress" };
        } else {
          const message = err instanceof Error ? err.message : String(err);
          state = { ...applyError(state, message), pending: false };
        }
      }
      return state;
    },
  };
}
