import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import type { InstanceSpec, TunerClient, WhatIfResponse } from "../src/api.js";
import { clampRatio, createBudgetExplorer } from "../src/budget.js";
import { committedInstance } from "../src/main.js";

function whatIfClient(log: number[]): TunerClient {
  return {
    whatIf: async (_session: string, ratio: number): Promise<WhatIfResponse> => {
      log.push(ratio);
      return {
        schema_version: 1,
        budget_ratio: ratio,
        value: 100 * (1 - ratio),
        utility_ratio: 1 - ratio,
      };
    },
  } as unknown as TunerClient;
}

describe("clampRatio", () => {
  it("clamps out-of-range and non-finite input", () => {
    expect(clampRatio(-0.5)).toBe(0);
    expect(clampRatio(1.5)).toBe(1);
    expect(clampRatio(Number.NaN)).toBe(0);
    expect(clampRatio(0.25)).toBe(0.25);
  });
});

describe("committedInstance", () => {
  it("scales the defender budget to the chosen ratio of full coverage", () => {
    const instance: InstanceSpec = {
      websites: [
        { id: "a", t: 10, t_all: 20, c: 2, pi: 1 },
        { id: "b", t: 5, t_all: 30, c: 4, pi: 2 },
      ],
      budget_defender: 7,
      budget_attacker: 3,
      budget_effort: 50,
    };
    // Full coverage costs 2*10 + 4*5 = 40.
    expect(committedInstance(instance, 0.5).budget_defender).toBe(20);
    expect(committedInstance(instance, 1).budget_defender).toBe(40);
    expect(committedInstance(instance, 0).budget_defender).toBe(0);
  });
});

describe("createBudgetExplorer", () => {
  beforeEach(() => {
    vi.useFakeTimers();
  });
  afterEach(() => {
    vi.useRealTimers();
  });

  it("debounces slider movement to a single request", async () => {
    const log: number[] = [];
    const explorer = createBudgetExplorer(whatIfClient(log), "s1", 150);
    const first = explorer.move(0.2);
    const second = explorer.move(0.4);
    const third = explorer.move(0.6);
    await vi.advanceTimersByTimeAsync(200);
    expect(await first).toBeNull();
    expect(await second).toBeNull();
    const result = await third;
    expect(result?.budget_ratio).toBe(0.6);
    expect(log).toEqual([0.6]);
  });

  it("records sparkline points from responses only", async () => {
    const log: number[] = [];
    const explorer = createBudgetExplorer(whatIfClient(log), "s1", 10);
    const a = explorer.move(0.0);
    await vi.advanceTimersByTimeAsync(20);
    await a;
    const b = explorer.move(1.0);
    await vi.advanceTimersByTimeAsync(20);
    await b;
    expect(explorer.points()).toEqual([
      { ratio: 0.0, utilityRatio: 1.0 },
      { ratio: 1.0, utilityRatio: 0.0 },
    ]);
    expect(explorer.lastReadout()?.utility_ratio).toBe(0.0);
  });

  it("clamps the requested ratio before calling the service", async () => {
    const log: number[] = [];
    const explorer = createBudgetExplorer(whatIfClient(log), "s1", 10);
    const p = explorer.move(2.5);
    await vi.advanceTimersByTimeAsync(20);
    await p;
    expect(log).toEqual([1]);
  });
});
