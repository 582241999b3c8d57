import type { SolveResponse } from "../src/api.js";

/** Canned service payloads used by the snapshot tests. Values are
 * intentionally irregular so any client-side recomputation would show up
 * as a snapshot diff. */

export const threeSites: SolveResponse = {
  schema_version: 1,
  session_id: "fixture-a",
  value: 12.3456789,
  lower_bound: 12.3456,
  upper_bound: 12.3457,
  method: "cybertweak",
  status: "optimal",
  sites: [
    {
      id: "w1",
      name: "news portal",
      t: 40,
      t_all: 400,
      c: 2,
      x: 0.73123,
      risk_score: 0.912,
      risk_band: "High",
    },
    {
      id: "w2",
      name: "webmail",
      t: 30,
      t_all: 120,
      c: 1,
      x: 0.25,
      risk_score: 0.41,
      risk_band: "Medium",
    },
    {
      id: "w3",
      name: "forum",
      t: 10,
      t_all: 50,
      c: 1,
      x: 0.0,
      risk_score: 0.05,
      risk_band: "Low",
    },
  ],
};

export const tiedScores: SolveResponse = {
  schema_version: 1,
  session_id: "fixture-b",
  value: 0.5,
  lower_bound: 0.5,
  upper_bound: 0.5,
  method: "greedytweak",
  status: "optimal",
  sites: [
    {
      id: "zeta",
      name: null,
      t: 5,
      t_all: 10,
      c: 1,
      x: 1.0,
      risk_score: 0.3,
      risk_band: "Medium",
    },
    {
      id: "alpha",
      name: "alpha mirror",
      t: 5,
      t_all: 10,
      c: 1,
      x: 0.5,
      risk_score: 0.3,
      risk_band: "Medium",
    },
  ],
};

export const withMarkup: SolveResponse = {
  schema_version: 1,
  session_id: "fixture-c",
  value: 7,
  lower_bound: 7,
  upper_bound: 7,
  method: "cybertweak",
  status: "optimal",
  sites: [
    {
      id: "evil",
      name: '<script>alert("x")</script>',
      t: 1,
      t_all: 2,
      c: 3,
      x: 0.999,
      risk_score: 1.0,
      risk_band: "High",
    },
  ],
};
