/** Panel state: a pure function of the last service responses plus pending
 * flags. Reducers below never invent numbers; they only copy service
 * payload fields into place. */

import type { FeedbackResponse, SolveResponse } from "./api.js";

export type Verdict = "Acceptable" | "Degraded";

export interface PanelRow {
  id: string;
  name: string;
  visitsPerWeek: number;
  /** Alteration probability as a percentage in [0, 100]. */
  alterPercent: number;
  riskScore: number;
  riskBand: "Low" | "Medium" | "High";
  lastFeedback: Verdict | null;
  /** Set when the latest feedback response changed this row's cost. */
  changed: boolean;
}

export interface PanelState {
  sessionId: string | null;
  rows: PanelRow[];
  gameValue: number | null;
  sliderRatio: number;
  pending: boolean;
  toast: string | null;
  errorBanner: string | null;
}

export function initialState(): PanelState {
  return {
    sessionId: null,
    rows: [],
    gameValue: null,
    sliderRatio: 1.0,
    pending: false,
    toast: null,
    errorBanner: null,
  };
}

/** Rows from a solve payload, sorted by risk score descending (stable on
 * id for equal scores). */
export function applySolve(
  state: PanelState,
  response: SolveResponse,
  feedbackLog: ReadonlyMap<string, Verdict> = new Map(),
  changedId: string | null = null,
): PanelState {
  const rows: PanelRow[] = response.sites.map((site) => ({
    id: site.id,
    name: site.name ?? site.id,
    visitsPerWeek: site.t,
    alterPercent: site.x * 100,
    riskScore: site.risk_score,
    riskBand: site.risk_band,
    lastFeedback: feedbackLog.get(site.id) ?? null,
    changed: site.id === changedId,
  }));
  rows.sort((a, b) => b.riskScore - a.riskScore || a.id.localeCompare(b.id));
  return {
    ...state,
    sessionId: response.session_id,
    rows,
    gameValue: response.value,
    errorBanner: null,
  };
}

export function applyFeedback(
  state: PanelState,
  response: FeedbackResponse,
  feedbackLog: ReadonlyMap<string, Verdict>,
): PanelState {
  return applySolve(state, response.result, feedbackLog, response.website_id);
}

/** Malformed or failed response: keep the stale table, raise the banner. */
export function applyError(state: PanelState, message: string): PanelState {
  return { ...state, errorBanner: message };
}
