/** Budget what-if explorer: a debounced slider whose readout and sparkline
 * points are verbatim service responses. */

import type { TunerClient, WhatIfResponse } from "./api.js";

export interface SparklinePoint {
  ratio: number;
  utilityRatio: number;
}

export interface BudgetExplorer {
  /** Slider movement; resolves with the response when the debounce fires,
   * or null when superseded by a later movement. */
  move(ratio: number): Promise<WhatIfResponse | null>;
  points(): SparklinePoint[];
  lastReadout(): WhatIfResponse | null;
}

export function clampRatio(ratio: number): number {
  if (Number.isNaN(ratio)) return 0;
  return Math.min(1, Math.max(0, ratio));
}

export function createBudgetExplorer(
  client: TunerClient,
  sessionId: string,
  debounceMs = 150,
  setTimer: typeof setTimeout = setTimeout,
  clearTimer: typeof clearTimeout = clearTimeout,
): BudgetExplorer {
  const visited: SparklinePoint[] = [];
  let last: WhatIfResponse | null = null;
  let timer: ReturnType<typeof setTimeout> | null = null;
  let generation = 0;
  let cancelPrevious: (() => void) | null = null;

  return {
    points: () => [...visited],
    lastReadout: () => last,
    move(ratio: number): Promise<WhatIfResponse | null> {
      const clamped = clampRatio(ratio);
      const mine = ++generation;
      if (timer !== null) clearTimer(timer);
      // A superseded movement resolves to null rather than hanging.
      cancelPrevious?.();
      return new Promise((resolve, reject) => {
        cancelPrevious = () => resolve(null);
        timer = setTimer(async () => {
          if (mine !== generation) {
            resolve(null);
            return;
          }
          try {
            const response = await client.whatIf(sessionId, clamped);
            if (mine === generation) {
              last = response;
              visited.push({
                ratio: response.budget_ratio,
                utilityRatio: response.utility_ratio,
              });
            }
            resolve(mine === generation ? response : null);
          } catch (err) {
            reject(err);
          }
        }, debounceMs);
      });
    },
  };
}
