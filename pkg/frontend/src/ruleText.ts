/** Live rule-string preview, rendered identically to the backend so the
 * preview always matches the strings echoed in the evaluation report. */

import type { RuleConfig, RulesConfig } from "./types.js";
import { formatSig } from "./format.js";

function criterionText(
  label: string,
  directionSymbol: string,
  threshold: number,
  confidencePct: number,
  nogo: boolean,
): string {
  const rel = nogo ? "<" : "≥";
  return `PP(${label} ${directionSymbol} ${formatSig(threshold)}) ${rel} ${formatSig(confidencePct)} %`;
}

function ruleText(
  rule: RuleConfig,
  label: string,
  directionSymbol: string,
  nogo: boolean,
): string {
  const joiner = rule.combinator === "and" ? " and " : " or ";
  return rule.criteria
    .map((c) =>
      criterionText(label, directionSymbol, c.threshold, c.confidence_pct, nogo),
    )
    .join(joiner);
}

/** Render the Go and No-Go rule strings for display. */
export function renderRuleStrings(rules: RulesConfig): {
  go: string;
  nogo: string;
} {
  const sym = rules.direction === "greater_or_equal" ? "≥" : "≤";
  return {
    go: ruleText(rules.go, rules.label, sym, false),
    nogo: ruleText(rules.nogo, rules.label, sym, true),
  };
}
