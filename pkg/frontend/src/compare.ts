/** Two-panel comparison of the current run against the previous one, for
 * what-if exploration: tweak a setting, re-run, and see the deltas. */

import type { RunReport } from "./types.js";

export interface OcDelta {
  n: number;
  true_value: number;
  p_go_before: number;
  p_go_after: number;
  p_go_delta: number;
  p_nogo_before: number;
  p_nogo_after: number;
  p_nogo_delta: number;
}

/** Row-wise deltas for (n, true_value) pairs present in both reports. */
export function compareRuns(
  previous: RunReport,
  current: RunReport,
): OcDelta[] {
  const key = (n: number, tv: number) => `${n}|${tv}`;
  const before = new Map(
    previous.oc_rows.map((r) => [key(r.n, r.true_value), r]),
  );
  const out: OcDelta[] = [];
  for (const row of current.oc_rows) {
    const prev = before.get(key(row.n, row.true_value));
    if (!prev) continue;
    out.push({
      n: row.n,
      true_value: row.true_value,
      p_go_before: prev.p_go,
      p_go_after: row.p_go,
      p_go_delta: row.p_go - prev.p_go,
      p_nogo_before: prev.p_nogo,
      p_nogo_after: row.p_nogo,
      p_nogo_delta: row.p_nogo - prev.p_nogo,
    });
  }
  return out;
}

/** One-line summary of what changed between the two runs' settings. */
export function settingsDiff(
  previous: RunReport,
  current: RunReport,
): string[] {
  const diffs: string[] = [];
  const walk = (a: unknown, b: unknown, path: string) => {
    if (typeof a !== typeof b || a === null || b === null) {
      if (JSON.stringify(a) !== JSON.stringify(b)) {
        diffs.push(`${path}: ${JSON.stringify(a)} -> ${JSON.stringify(b)}`);
      }
      return;
    }
    if (typeof a === "object" && typeof b === "object") {
      const keys = new Set([
        ...Object.keys(a as object),
        ...Object.keys(b as object),
      ]);
      for (const k of keys) {
        walk(
          (a as Record<string, unknown>)[k],
          (b as Record<string, unknown>)[k],
          path ? `${path}.${k}` : k,
        );
      }
      return;
    }
    if (a !== b) {
      diffs.push(`${path}: ${JSON.stringify(a)} -> ${JSON.stringify(b)}`);
    }
  };
  walk(previous.spec_echo, current.spec_echo, "");
  return diffs;
}
