/** Typed client for the local policy-tuning service. All numbers shown in
 * the panel come from these responses; the UI never recomputes them. */

export interface SiteRow {
  id: string;
  name: string | null;
  t: number;
  t_all: number;
  c: number;
  x: number;
  risk_score: number;
  risk_band: "Low" | "Medium" | "High";
}

export interface SolveResponse {
  schema_version: number;
  session_id: string;
  value: number;
  lower_bound: number;
  upper_bound: number;
  method: string;
  status: string;
  sites: SiteRow[];
}

export interface FeedbackResponse {
  schema_version: number;
  website_id: string;
  old_c: number;
  new_c: number;
  result: SolveResponse;
}

export interface WhatIfResponse {
  schema_version: number;
  budget_ratio: number;
  value: number;
  utility_ratio: number;
}

export interface WebsiteSpec {
  id: string;
  name?: string | null;
  t: number;
  t_all: number;
  c: number;
  pi: number;
  p_evade?: number;
  q_block?: number;
}

export interface InstanceSpec {
  websites: WebsiteSpec[];
  budget_defender: number;
  budget_attacker: number;
  budget_effort: number | "unlimited";
}

export class ServiceError extends Error {
  constructor(
    public status: number,
    message: string,
  ) {
    super(message);
  }
}

async function request<T>(
  baseUrl: string,
  path: string,
  init?: RequestInit,
): Promise<T> {
  let res: Response;
  try {
    res = await fetch(baseUrl + path, init);
  } catch (err) {
    throw new ServiceError(0, `service unreachable: ${String(err)}`);
  }
  const body = await res.json().catch(() => ({}));
  if (!res.ok) {
    throw new ServiceError(res.status, body.error ?? res.statusText);
  }
  return body as T;
}

export class TunerClient {
  constructor(private baseUrl: string) {}

  createSession(instance: InstanceSpec): Promise<{ session_id: string }> {
    return request(this.baseUrl, "/sessions", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(instance),
    });
  }

  solve(sessionId: string, method = "auto"): Promise<SolveResponse> {
    return request(this.baseUrl, `/sessions/${sessionId}/solve`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ method }),
    });
  }

  feedback(
    sessionId: string,
    websiteId: string,
    verdict: "Acceptable" | "Degraded",
  ): Promise<FeedbackResponse> {
    return request(this.baseUrl, `/sessions/${sessionId}/feedback`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ website_id: websiteId, verdict }),
    });
  }

  whatIf(sessionId: string, budgetRatio: number): Promise<WhatIfResponse> {
    const q = encodeURIComponent(String(budgetRatio));
    return request(this.baseUrl, `/sessions/${sessionId}/what-if?budget_ratio=${q}`);
  }

  health(): Promise<{ status: string }> {
    return request(this.baseUrl, "/healthz");
  }
}
