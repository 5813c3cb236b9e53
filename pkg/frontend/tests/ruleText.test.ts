import { describe, expect, it } from "vitest";

import { renderRuleStrings } from "../src/ruleText.js";
import type { RulesConfig } from "../src/types.js";

const EXAMPLE_1: RulesConfig = {
  direction: "greater_or_equal",
  dominated: "nogo",
  label: "RR",
  go: {
    criteria: [{ threshold: 0.2, confidence_pct: 80 }],
    combinator: "and",
  },
  nogo: {
    criteria: [{ threshold: 0.3, confidence_pct: 10 }],
    combinator: "and",
  },
};

const EXAMPLE_2: RulesConfig = {
  direction: "less",
  dominated: "nogo",
  label: "HR",
  go: {
    criteria: [
      { threshold: 1.0, confidence_pct: 90 },
      { threshold: 0.7, confidence_pct: 50 },
    ],
    combinator: "and",
  },
  nogo: {
    criteria: [
      { threshold: 1.0, confidence_pct: 90 },
      { threshold: 0.7, confidence_pct: 50 },
    ],
    combinator: "and",
  },
};

const EXAMPLE_3: RulesConfig = {
  direction: "less",
  dominated: "nogo",
  label: "mean",
  go: {
    criteria: [
      { threshold: 4.0, confidence_pct: 90 },
      { threshold: 2.5, confidence_pct: 50 },
    ],
    combinator: "or",
  },
  nogo: {
    criteria: [{ threshold: 4.0, confidence_pct: 20 }],
    combinator: "and",
  },
};

describe("rule-string preview", () => {
  // goldens captured from the backend's own rendering of the bundled configs
  it("matches the service for the single-arm binary example", () => {
    expect(renderRuleStrings(EXAMPLE_1)).toEqual({
      go: "PP(RR ≥ 0.2) ≥ 80 %",
      nogo: "PP(RR ≥ 0.3) < 10 %",
    });
  });

  it("matches the service for the hazard-ratio example", () => {
    expect(renderRuleStrings(EXAMPLE_2)).toEqual({
      go: "PP(HR ≤ 1) ≥ 90 % and PP(HR ≤ 0.7) ≥ 50 %",
      nogo: "PP(HR ≤ 1) < 90 % and PP(HR ≤ 0.7) < 50 %",
    });
  });

  it("matches the service for the Bayesian normal example", () => {
    expect(renderRuleStrings(EXAMPLE_3)).toEqual({
      go: "PP(mean ≤ 4) ≥ 90 % or PP(mean ≤ 2.5) ≥ 50 %",
      nogo: "PP(mean ≤ 4) < 20 %",
    });
  });

  it("direction toggle flips the comparison symbol everywhere", () => {
    const flipped = renderRuleStrings({
      ...EXAMPLE_1,
      direction: "less",
    });
    expect(flipped.go).toBe("PP(RR ≤ 0.2) ≥ 80 %");
    expect(flipped.nogo).toBe("PP(RR ≤ 0.3) < 10 %");
    expect(flipped.go).not.toContain("≥ 0.2) ≥ 80".replace("≥ 0.2", "≥0.2"));
  });

  it("no-go criteria always use strict <", () => {
    const { nogo } = renderRuleStrings(EXAMPLE_3);
    expect(nogo).toContain(") < ");
    expect(nogo).not.toContain(") ≥ ");
  });
});
