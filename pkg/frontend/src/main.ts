/** Panel wiring for the standalone page: session bootstrap, table refresh,
 * feedback buttons, and the budget slider. */

import { TunerClient, type InstanceSpec } from "./api.js";
import { createBudgetExplorer } from "./budget.js";
import { createFeedbackController } from "./feedback.js";
import { renderPolicy, renderHtml } from "./render.js";
import { initialState, type PanelState, type Verdict } from "./state.js";

/** Committing a slider position re-creates the session at the chosen
 * defender budget; the service owns all solving. */
export function committedInstance(instance: InstanceSpec, ratio: number): InstanceSpec {
  const full = instance.websites.reduce((acc, w) => acc + w.c * w.t, 0);
  return { ...instance, budget_defender: ratio * full };
}

export async function bootstrapPanel(
  root: HTMLElement,
  client: TunerClient,
  instance: InstanceSpec,
): Promise<void> {
  const { session_id } = await client.createSession(instance);
  const solve = await client.solve(session_id);
  let rendered = renderPolicy(solve, initialState());
  let state: PanelState = rendered.state;
  root.innerHTML = rendered.html;

  const feedback = createFeedbackController(client, session_id, state);
  const explorer = createBudgetExplorer(client, session_id);

  root.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    const siteId = target.dataset.feedbackSite;
    const verdict = target.dataset.verdict as Verdict | undefined;
    if (!siteId || !verdict) return;
    void feedback.submit(siteId, verdict).then((next) => {
      state = next;
      root.innerHTML = renderHtml(state);
    });
  });

  root.addEventListener("input", (event) => {
    const target = event.target as HTMLInputElement;
    if (target.type !== "range") return;
    void explorer.move(Number(target.value) / 100).then((readout) => {
      if (!readout) return;
      const label = root.querySelector(".what-if-readout");
      if (label) {
        label.textContent = `${(readout.utility_ratio * 100).toFixed(1)}% attacker utility`;
      }
    });
  });
}
