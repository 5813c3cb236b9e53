/** Wire types mirroring the evaluation service's JSON contract. */

export type Design = "single_arm" | "two_arm" | "multi_arm" | "correlated";
export type Framework = "frequentist" | "bayesian";
export type Direction = "greater_or_equal" | "less";
export type Combinator = "and" | "or";
export type DominatedRule = "go" | "nogo";

export interface CriterionConfig {
  threshold: number;
  confidence_pct: number;
}

export interface RuleConfig {
  criteria: CriterionConfig[];
  combinator: Combinator;
}

export interface RulesConfig {
  direction: Direction;
  dominated: DominatedRule;
  label: string;
  go: RuleConfig;
  nogo: RuleConfig;
  threshold_scale?: "hazard_ratio" | "log_hazard_ratio";
}

export interface PriorConfig {
  type: "beta" | "normal" | "normal_gamma";
  [key: string]: string | number;
}

export interface ComputeConfig {
  seed?: number;
  stop_tol?: number;
  n_sims?: number;
  workers?: number;
}

export interface InterimConfig {
  information_fraction: number;
  rule: RuleConfig;
  n_sims?: number;
}

export interface DesignConfig {
  design: Design;
  endpoint: string;
  framework: Framework;
  rules: RulesConfig;
  rules_y?: RulesConfig;
  parameters: Record<string, unknown>;
  compute?: ComputeConfig;
  interim?: InterimConfig;
}

export interface CutoffRow {
  n: number;
  go_boundary: number | null;
  nogo_boundary: number | null;
  overlap: boolean;
  boundary_statistic: string;
  warnings: string[];
}

export interface OcRow {
  n: number;
  true_value: number;
  p_go: number;
  p_nogo: number;
  p_inconclusive: number;
  mc_se: number | null;
  p_stop_interim: number | null;
}

export type PlotKind = "cutoff_vs_n" | "oc_vs_n" | "oc_vs_true_value";

export interface PlotSeries {
  kind: PlotKind;
  x: number[];
  series: Record<string, number[]>;
}

export interface RunReport {
  spec_echo: Record<string, unknown>;
  rule_strings: { go: string; nogo: string };
  cutoffs: CutoffRow[];
  oc_rows: OcRow[];
  warnings: string[];
  plot_series: PlotSeries[];
  provenance: { seed: number; n_sims: number; version: string };
}

export interface ServiceError {
  code: string;
  message: string;
  path: string;
  suggested_n_sims?: number;
}
