/** Pure rendering of the policy table; snapshot-testable HTML with no
 * client-side recomputation — every number is formatted straight from the
 * service payload. */

import type { SolveResponse } from "./api.js";
import { applySolve, initialState, type PanelRow, type PanelState } from "./state.js";

function isSolveResponse(value: unknown): value is SolveResponse {
  const v = value as SolveResponse;
  return (
    typeof v === "object" &&
    v !== null &&
    typeof v.session_id === "string" &&
    typeof v.value === "number" &&
    Array.isArray(v.sites) &&
    v.sites.every(
      (s) =>
        typeof s.id === "string" &&
        typeof s.x === "number" &&
        typeof s.risk_score === "number" &&
        (s.risk_band === "Low" || s.risk_band === "Medium" || s.risk_band === "High"),
    )
  );
}

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function rowHtml(row: PanelRow): string {
  const marker = row.changed ? " *" : "";
  const feedback = row.lastFeedback ?? "—";
  return [
    `<tr data-site="${escapeHtml(row.id)}">`,
    `<td class="badge badge-${row.riskBand.toLowerCase()}">${row.riskBand}</td>`,
    `<td>${escapeHtml(row.name)}</td>`,
    `<td>${row.visitsPerWeek} visits/week</td>`,
    `<td>${row.alterPercent.toFixed(1)}%${marker}</td>`,
    `<td>${feedback}</td>`,
    `</tr>`,
  ].join("");
}

/** Site table plus risk badges for a solve response. Malformed input
 * returns the previous state with an error banner; the stale table is kept. */
export function renderPolicy(
  response: unknown,
  previous: PanelState = initialState(),
): { state: PanelState; html: string } {
  if (!isSolveResponse(response)) {
    const state = { ...previous, errorBanner: "malformed service response" };
    return { state, html: renderHtml(state) };
  }
  const state = applySolve(previous, response);
  return { state, html: renderHtml(state) };
}

export function renderHtml(state: PanelState): string {
  const banner = state.errorBanner
    ? `<div class="banner error">${escapeHtml(state.errorBanner)}</div>`
    : "";
  const toast = state.toast ? `<div class="toast">${escapeHtml(state.toast)}</div>` : "";
  const header =
    "<tr><th>Risk</th><th>Website</th><th>Traffic</th><th>Altering</th><th>Feedback</th></tr>";
  const body = state.rows.map(rowHtml).join("\n");
  const value =
    state.gameValue === null
      ? ""
      : `<div class="value">Expected exposure: ${state.gameValue.toFixed(4)}</div>`;
  return `${banner}${toast}${value}<table>${header}\n${body}</table>`;
}
