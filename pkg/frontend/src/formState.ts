/** Form state for the design-exploration UI.
 *
 * The state mirrors the service's config document one field to one control,
 * plus UI-only bookkeeping (in-flight flag, last response, pending edits).
 * `toConfig` serializes exactly to a valid config document; `validateForm`
 * reports problems with the same field paths the service uses in its
 * validation errors, so inline messages and server messages line up. */

import type {
  Combinator,
  CriterionConfig,
  Design,
  DesignConfig,
  Direction,
  DominatedRule,
  Framework,
  PriorConfig,
  RuleConfig,
  RulesConfig,
  RunReport,
} from "./types.js";

export interface CriterionForm {
  enabled: boolean;
  threshold: number;
  confidencePct: number;
}

export interface RuleForm {
  criterion1: CriterionForm;
  criterion2: CriterionForm;
  combinator: Combinator;
}

export interface RulesForm {
  direction: Direction;
  dominated: DominatedRule;
  label: string;
  go: RuleForm;
  nogo: RuleForm;
  thresholdScale: "hazard_ratio" | "log_hazard_ratio";
}

export interface InterimForm {
  enabled: boolean;
  informationFraction: number;
  threshold: number;
  confidencePct: number;
}

export interface FormState {
  design: Design;
  endpoint: string;
  framework: Framework;
  rules: RulesForm;
  rulesY: RulesForm;
  parameters: Record<string, unknown>;
  prior: PriorConfig | null;
  seed: number;
  stopTol: number;
  nSims: number;
  workers: number;
  interim: InterimForm;
  // UI-only state
  requestInFlight: boolean;
  lastReport: RunReport | null;
  lastRawResponse: Uint8Array | null;
  previousReport: RunReport | null;
}

export function defaultCriterion(enabled: boolean): CriterionForm {
  return { enabled, threshold: 0.2, confidencePct: enabled ? 80 : 50 };
}

export function defaultRules(): RulesForm {
  return {
    direction: "greater_or_equal",
    dominated: "nogo",
    label: "RR",
    go: {
      criterion1: { enabled: true, threshold: 0.2, confidencePct: 80 },
      criterion2: defaultCriterion(false),
      combinator: "and",
    },
    nogo: {
      criterion1: { enabled: true, threshold: 0.3, confidencePct: 10 },
      criterion2: defaultCriterion(false),
      combinator: "and",
    },
    thresholdScale: "hazard_ratio",
  };
}

export function defaultFormState(): FormState {
  return {
    design: "single_arm",
    endpoint: "binary",
    framework: "frequentist",
    rules: defaultRules(),
    rulesY: defaultRules(),
    parameters: {
      sample_sizes: [25],
      true_values: [0.15, 0.2, 0.3, 0.4],
      oc_pivots: { fixed_n: 25, fixed_true_value: 0.3 },
    },
    prior: null,
    seed: 425,
    stopTol: 1e-4,
    nSims: 2000,
    workers: 1,
    interim: {
      enabled: false,
      informationFraction: 0.5,
      threshold: 0.2,
      confidencePct: 50,
    },
    requestInFlight: false,
    lastReport: null,
    lastRawResponse: null,
    previousReport: null,
  };
}

// ------------------------------------------------------------------------
// Conditional panels: which control groups are visible for a given state
// ------------------------------------------------------------------------

export interface VisibleSections {
  prior: boolean;
  goCriterion2: boolean;
  nogoCriterion2: boolean;
  thresholdScale: boolean;
  interimPanel: boolean;
  secondEndpointRules: boolean;
  sigma: boolean;
  allocation: boolean;
}

export function visibleSections(state: FormState): VisibleSections {
  const survivalHr =
    state.design === "two_arm" && state.endpoint === "survival_hr";
  return {
    prior: state.framework === "bayesian",
    goCriterion2: state.rules.go.criterion2.enabled,
    nogoCriterion2: state.rules.nogo.criterion2.enabled,
    thresholdScale: survivalHr,
    interimPanel: state.design === "single_arm" || state.design === "two_arm",
    secondEndpointRules: state.design === "correlated",
    sigma: state.endpoint.startsWith("normal"),
    allocation: survivalHr,
  };
}

// ------------------------------------------------------------------------
// Serialization: FormState -> config document
// ------------------------------------------------------------------------

function criteriaOf(rule: RuleForm): CriterionConfig[] {
  const out: CriterionConfig[] = [
    {
      threshold: rule.criterion1.threshold,
      confidence_pct: rule.criterion1.confidencePct,
    },
  ];
  if (rule.criterion2.enabled) {
    out.push({
      threshold: rule.criterion2.threshold,
      confidence_pct: rule.criterion2.confidencePct,
    });
  }
  return out;
}

function ruleConfig(rule: RuleForm): RuleConfig {
  return { criteria: criteriaOf(rule), combinator: rule.combinator };
}

function rulesConfig(rules: RulesForm, includeScale: boolean): RulesConfig {
  const out: RulesConfig = {
    direction: rules.direction,
    dominated: rules.dominated,
    label: rules.label,
    go: ruleConfig(rules.go),
    nogo: ruleConfig(rules.nogo),
  };
  if (includeScale && rules.thresholdScale !== "hazard_ratio") {
    out.threshold_scale = rules.thresholdScale;
  }
  return out;
}

export function toConfig(state: FormState): DesignConfig {
  const sections = visibleSections(state);
  const parameters: Record<string, unknown> = { ...state.parameters };
  if (sections.prior && state.prior) parameters["prior"] = state.prior;
  const config: DesignConfig = {
    design: state.design,
    endpoint: state.endpoint,
    framework: state.framework,
    rules: rulesConfig(state.rules, sections.thresholdScale),
    parameters,
    compute: {
      seed: state.seed,
      stop_tol: state.stopTol,
      n_sims: state.nSims,
      workers: state.workers,
    },
  };
  if (sections.secondEndpointRules) {
    config.rules_y = rulesConfig(state.rulesY, false);
  }
  if (sections.interimPanel && state.interim.enabled) {
    config.interim = {
      information_fraction: state.interim.informationFraction,
      rule: {
        criteria: [
          {
            threshold: state.interim.threshold,
            confidence_pct: state.interim.confidencePct,
          },
        ],
        combinator: "and",
      },
    };
  }
  return config;
}

// ------------------------------------------------------------------------
// Validation: inline messages with service-compatible field paths
// ------------------------------------------------------------------------

export interface FieldError {
  path: string;
  message: string;
}

function checkCriterion(
  c: CriterionForm,
  path: string,
  errors: FieldError[],
): void {
  if (!Number.isFinite(c.threshold)) {
    errors.push({ path: `${path}.threshold`, message: "must be finite" });
  }
  if (
    !Number.isFinite(c.confidencePct) ||
    c.confidencePct <= 0 ||
    c.confidencePct >= 100
  ) {
    errors.push({
      path: `${path}.confidence_pct`,
      message: "must be strictly between 0 and 100",
    });
  }
}

function checkRule(rule: RuleForm, path: string, errors: FieldError[]): void {
  checkCriterion(rule.criterion1, `${path}.criteria[0]`, errors);
  if (rule.criterion2.enabled) {
    checkCriterion(rule.criterion2, `${path}.criteria[1]`, errors);
  }
}

export function validateForm(state: FormState): FieldError[] {
  const errors: FieldError[] = [];
  const sections = visibleSections(state);
  checkRule(state.rules.go, "rules.go", errors);
  checkRule(state.rules.nogo, "rules.nogo", errors);
  if (sections.secondEndpointRules) {
    checkRule(state.rulesY.go, "rules_y.go", errors);
    checkRule(state.rulesY.nogo, "rules_y.nogo", errors);
  }
  if (!state.rules.label.trim()) {
    errors.push({ path: "rules.label", message: "label is required" });
  }
  if (sections.prior && !state.prior) {
    errors.push({
      path: "parameters.prior",
      message: "a prior is required under the Bayesian framework",
    });
  }
  if (!Number.isInteger(state.seed) || state.seed < 0) {
    errors.push({
      path: "compute.seed",
      message: "seed must be a non-negative integer",
    });
  }
  if (!(state.stopTol > 0)) {
    errors.push({
      path: "compute.stop_tol",
      message: "stop tolerance must be positive",
    });
  }
  if (!Number.isInteger(state.nSims) || state.nSims < 1) {
    errors.push({
      path: "compute.n_sims",
      message: "simulation count must be a positive integer",
    });
  }
  if (state.interim.enabled && sections.interimPanel) {
    const f = state.interim.informationFraction;
    if (!(f > 0 && f < 1)) {
      errors.push({
        path: "interim.information_fraction",
        message: "information fraction must be strictly between 0 and 1",
      });
    }
  }
  return errors;
}

/** Submission is blocked unless the form is valid. */
export function canSubmit(state: FormState): boolean {
  return !state.requestInFlight && validateForm(state).length === 0;
}
