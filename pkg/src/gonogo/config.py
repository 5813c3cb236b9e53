"""Declarative JSON input schema: parsing, validation, defaulting, dispatch.

This is the single source of truth consumed by both the CLI and the HTTP
service.  A document selects a design family, an endpoint, a framework, the
decision rules, design parameters, and compute settings; ``dispatch`` routes
it to the matching design module and assembles a report.
"""

import dataclasses
import json
import math
import time
from dataclasses import dataclass

import numpy as np

from . import kernels, reporting
from .designs import correlated, interim, mcpmod, single_arm, two_arm
from .designs.common import Framework, OperatingCharacteristics
from .errors import ParseError, ValidationError
from .rules import (
    Combinator,
    Criterion,
    Direction,
    DominatedRule,
    Rule,
    RuleSet,
    validate_rule_set,
)

DEFAULT_SEED = 425
DEFAULT_STOP_TOL = 1e-4
DEFAULT_N_SIMS = 2000

_DESIGNS = ("single_arm", "two_arm", "multi_arm", "correlated")


@dataclass
class DesignConfig:
    design: str
    spec: object
    interim_spec: interim.InterimSpec | None
    pivots: dict
    label: str
    rules_y: RuleSet | None          # correlated designs only
    echo: dict                        # normalized document with defaults


# ------------------------------------------------------------- helpers ------

def _check_keys(block: dict, allowed: set[str], path: str) -> None:
    if not isinstance(block, dict):
        raise ValidationError("expected an object", path=path)
    unknown = sorted(set(block) - allowed)
    if unknown:
        raise ValidationError(f"unknown field(s): {', '.join(unknown)}",
                              code="UNKNOWN_FIELD", path=path)


def _require(block: dict, key: str, path: str):
    if key not in block:
        raise ValidationError(f"missing required field {key!r}", path=path)
    return block[key]


def _number(v, path: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ValidationError("expected a number", path=path)
    return float(v)


def _int(v, path: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise ValidationError("expected an integer", path=path)
    return v


def _enum(v, options: dict, path: str):
    if v not in options:
        raise ValidationError(
            f"expected one of {sorted(options)}, got {v!r}", path=path)
    return options[v]


# ------------------------------------------------------------- rules --------

def _parse_criterion(block: dict, path: str) -> Criterion:
    _check_keys(block, {"threshold", "confidence_pct"}, path)
    t = _number(_require(block, "threshold", path), f"{path}.threshold")
    c = _number(_require(block, "confidence_pct", path),
                f"{path}.confidence_pct")
    if not 0.0 < c < 100.0:
        raise ValidationError("confidence_pct must lie in (0, 100)",
                              code="INVALID_CONFIDENCE",
                              path=f"{path}.confidence_pct")
    return Criterion(t, c)


def _parse_rule(block: dict, path: str) -> Rule:
    _check_keys(block, {"criteria", "combinator"}, path)
    crits = _require(block, "criteria", path)
    if not isinstance(crits, list) or not 1 <= len(crits) <= 2:
        raise ValidationError("criteria must be a list of 1 or 2 entries",
                              code="INVALID_CRITERIA_COUNT",
                              path=f"{path}.criteria")
    combinator = _enum(block.get("combinator", "and"),
                       {"and": Combinator.AND, "or": Combinator.OR},
                       f"{path}.combinator")
    return Rule(tuple(_parse_criterion(c, f"{path}.criteria[{i}]")
                      for i, c in enumerate(crits)), combinator)


_RULES_KEYS = {"direction", "dominated", "go", "nogo", "label",
               "threshold_scale"}


def _parse_rules(block: dict, path: str, *, hr_allowed: bool
                 ) -> tuple[RuleSet, str, bool]:
    """Returns (rule set, effect label, thresholds-were-log-scale)."""
    _check_keys(block, _RULES_KEYS, path)
    direction = _enum(_require(block, "direction", path),
                      {"greater_or_equal": Direction.GREATER_OR_EQUAL,
                       "less": Direction.LESS}, f"{path}.direction")
    dominated = _enum(block.get("dominated", "nogo"),
                      {"go": DominatedRule.GO, "nogo": DominatedRule.NOGO},
                      f"{path}.dominated")
    go = _parse_rule(_require(block, "go", path), f"{path}.go")
    nogo = _parse_rule(_require(block, "nogo", path), f"{path}.nogo")
    scale = block.get("threshold_scale")
    converted = False
    if scale is not None:
        if not hr_allowed:
            raise ValidationError(
                "threshold_scale applies only to hazard-ratio designs",
                path=f"{path}.threshold_scale")
        _enum(scale, {"hazard_ratio": 0, "log_hazard_ratio": 1},
              f"{path}.threshold_scale")
        if scale == "log_hazard_ratio":
            go = Rule(tuple(Criterion(math.exp(c.threshold), c.confidence_pct)
                            for c in go.criteria), go.combinator)
            nogo = Rule(tuple(Criterion(math.exp(c.threshold),
                                        c.confidence_pct)
                              for c in nogo.criteria), nogo.combinator)
            converted = True
    label = block.get("label", "effect")
    if not isinstance(label, str):
        raise ValidationError("label must be a string", path=f"{path}.label")
    return RuleSet(go=go, nogo=nogo, direction=direction,
                   dominated=dominated), label, converted


# ------------------------------------------------------------- priors -------

def _parse_prior(block: dict, path: str):
    _check_keys(block, {"type", "a", "b", "mean", "sd", "kappa", "shape",
                        "rate"}, path)
    kind = _require(block, "type", path)
    try:
        if kind == "beta":
            return kernels.BetaParams(_number(_require(block, "a", path),
                                              f"{path}.a"),
                                      _number(_require(block, "b", path),
                                              f"{path}.b"))
        if kind == "normal":
            return kernels.NormalParams(
                _number(_require(block, "mean", path), f"{path}.mean"),
                _number(_require(block, "sd", path), f"{path}.sd"))
        if kind == "normal_gamma":
            return kernels.NormalGammaParams(
                _number(_require(block, "mean", path), f"{path}.mean"),
                _number(_require(block, "kappa", path), f"{path}.kappa"),
                _number(_require(block, "shape", path), f"{path}.shape"),
                _number(_require(block, "rate", path), f"{path}.rate"))
    except ValueError as e:
        raise ValidationError(str(e), path=path) from e
    raise ValidationError(f"unknown prior type {kind!r}", path=f"{path}.type")


# ------------------------------------------------------------- compute ------

def _parse_compute(block: dict, design: str) -> dict:
    _check_keys(block, {"seed", "stop_tol", "n_sims", "workers"}, "compute")
    out = {
        "seed": _int(block.get("seed", DEFAULT_SEED), "compute.seed"),
        "stop_tol": _number(block.get("stop_tol", DEFAULT_STOP_TOL),
                            "compute.stop_tol"),
        "n_sims": _int(block.get("n_sims", DEFAULT_N_SIMS), "compute.n_sims"),
        "workers": _int(block.get("workers", 1), "compute.workers"),
    }
    if out["stop_tol"] <= 0.0:
        raise ValidationError("stop_tol must be > 0", path="compute.stop_tol")
    if out["n_sims"] < 1:
        raise ValidationError("n_sims must be >= 1", path="compute.n_sims")
    if out["workers"] < 1:
        raise ValidationError("workers must be >= 1", path="compute.workers")
    return out


def _parse_pivots(block: dict, path: str) -> dict:
    _check_keys(block, {"fixed_n", "fixed_true_value"}, path)
    out = {}
    if "fixed_n" in block:
        out["fixed_n"] = _int(block["fixed_n"], f"{path}.fixed_n")
    if "fixed_true_value" in block:
        out["fixed_true_value"] = _number(block["fixed_true_value"],
                                          f"{path}.fixed_true_value")
    return out


def _parse_interim(block: dict, base) -> interim.InterimSpec:
    _check_keys(block, {"information_fraction", "rule", "n_sims"}, "interim")
    frac = _number(_require(block, "information_fraction", "interim"),
                   "interim.information_fraction")
    rule = _parse_rule(_require(block, "rule", "interim"), "interim.rule")
    n_sims = _int(block.get("n_sims", DEFAULT_N_SIMS), "interim.n_sims")
    return interim.InterimSpec(
        base=base, information_fraction=frac, interim_rule=rule,
        n_sims=n_sims, seed=base.seed, workers=base.workers)


# --------------------------------------------------------- design parsers ---

def _arm_pairs(params: dict, path: str, *, events: bool) -> list[tuple[int, int]]:
    """Per-arm pairs, either given explicitly or as totals plus an
    allocation ratio (treatment:control)."""
    explicit = "events" if events else "arms"
    totals_key = "event_totals" if events else "sample_size_totals"
    if explicit in params:
        pairs = params[explicit]
        if not isinstance(pairs, list) or not all(
                isinstance(p, list) and len(p) == 2 for p in pairs):
            raise ValidationError(f"{explicit} must be a list of [t, c] pairs",
                                  path=f"{path}.{explicit}")
        return [(_int(a, f"{path}.{explicit}"), _int(b, f"{path}.{explicit}"))
                for a, b in pairs]
    if totals_key in params:
        alloc = _number(params.get("allocation", 1.0), f"{path}.allocation")
        if alloc <= 0.0:
            raise ValidationError("allocation must be > 0",
                                  path=f"{path}.allocation")
        out = []
        for tot in params[totals_key]:
            tot = _int(tot, f"{path}.{totals_key}")
            t = max(1, round(tot * alloc / (1.0 + alloc)))
            out.append((t, max(1, tot - t)))
        return out
    raise ValidationError(
        f"provide either {explicit} or {totals_key}", path=path)


def _true_values(params: dict, path: str) -> list[float]:
    vals = _require(params, "true_values", path)
    if not isinstance(vals, list) or not vals:
        raise ValidationError("true_values must be a nonempty list",
                              path=f"{path}.true_values")
    return [_number(v, f"{path}.true_values") for v in vals]


def _parse_single_arm(doc: dict, rules: RuleSet, framework: Framework,
                      compute: dict) -> single_arm.SingleArmSpec:
    endpoint = _enum(_require(doc, "endpoint", "$"),
                     {"binary": single_arm.SingleArmEndpoint.BINARY,
                      "normal_known_var":
                          single_arm.SingleArmEndpoint.NORMAL_KNOWN_VAR,
                      "normal_unknown_var":
                          single_arm.SingleArmEndpoint.NORMAL_UNKNOWN_VAR,
                      "survival": single_arm.SingleArmEndpoint.SURVIVAL},
                     "endpoint")
    params = doc.get("parameters", {})
    _check_keys(params, {"sample_sizes", "true_values", "sigma", "prior",
                         "survival_mode", "landmark_time", "oc_pivots"},
                "parameters")
    sizes = _require(params, "sample_sizes", "parameters")
    if not isinstance(sizes, list) or not sizes:
        raise ValidationError("sample_sizes must be a nonempty list",
                              path="parameters.sample_sizes")
    mode = _enum(params.get("survival_mode", "binomial_landmark"),
                 {"binomial_landmark": single_arm.SurvivalMode.BINOMIAL_LANDMARK,
                  "exponential_rate": single_arm.SurvivalMode.EXPONENTIAL_RATE},
                 "parameters.survival_mode")
    prior = (_parse_prior(params["prior"], "parameters.prior")
             if "prior" in params else None)
    spec = single_arm.SingleArmSpec(
        endpoint=endpoint, framework=framework,
        sample_sizes=[_int(n, "parameters.sample_sizes") for n in sizes],
        rules=rules, true_values=_true_values(params, "parameters"),
        sigma=(_number(params["sigma"], "parameters.sigma")
               if "sigma" in params else None),
        prior=prior, survival_mode=mode,
        landmark_time=(_number(params["landmark_time"],
                               "parameters.landmark_time")
                       if "landmark_time" in params else None),
        stop_tol=compute["stop_tol"], seed=compute["seed"],
        n_sims=compute["n_sims"], workers=compute["workers"])
    return single_arm.validate_spec(spec)


def _parse_two_arm(doc: dict, rules: RuleSet, framework: Framework,
                   compute: dict) -> two_arm.TwoArmSpec:
    endpoint = _enum(_require(doc, "endpoint", "$"),
                     {"binary_diff": two_arm.TwoArmEndpoint.BINARY_DIFF,
                      "normal_diff_known":
                          two_arm.TwoArmEndpoint.NORMAL_DIFF_KNOWN,
                      "normal_diff_unknown":
                          two_arm.TwoArmEndpoint.NORMAL_DIFF_UNKNOWN,
                      "survival_hr": two_arm.TwoArmEndpoint.SURVIVAL_HR},
                     "endpoint")
    params = doc.get("parameters", {})
    _check_keys(params, {"arms", "sample_size_totals", "events",
                         "event_totals", "allocation", "control_rate",
                         "control_mean", "sigmas", "priors", "hr_prior",
                         "true_values", "oc_pivots"}, "parameters")
    survival = endpoint is two_arm.TwoArmEndpoint.SURVIVAL_HR
    arms = events = None
    if survival:
        events = _arm_pairs(params, "parameters", events=True)
    else:
        arms = _arm_pairs(params, "parameters", events=False)
    sigmas = None
    if "sigmas" in params:
        s = params["sigmas"]
        if not isinstance(s, list) or len(s) != 2:
            raise ValidationError("sigmas must be [treatment_sd, control_sd]",
                                  path="parameters.sigmas")
        sigmas = (_number(s[0], "parameters.sigmas"),
                  _number(s[1], "parameters.sigmas"))
    priors = None
    if "priors" in params:
        block = params["priors"]
        _check_keys(block, {"treatment", "control"}, "parameters.priors")
        priors = {
            "treatment": _parse_prior(_require(block, "treatment",
                                               "parameters.priors"),
                                      "parameters.priors.treatment"),
            "control": _parse_prior(_require(block, "control",
                                             "parameters.priors"),
                                    "parameters.priors.control")}
    hr_prior = (_parse_prior(params["hr_prior"], "parameters.hr_prior")
                if "hr_prior" in params else None)
    if hr_prior is not None and not isinstance(hr_prior, kernels.NormalParams):
        raise ValidationError("hr_prior must be a normal prior on log HR",
                              path="parameters.hr_prior")
    spec = two_arm.TwoArmSpec(
        endpoint=endpoint, framework=framework, rules=rules,
        true_values=_true_values(params, "parameters"),
        arms=arms, events=events, sigmas=sigmas, priors=priors,
        hr_prior=hr_prior,
        control_rate=(_number(params["control_rate"],
                              "parameters.control_rate")
                      if "control_rate" in params else None),
        control_mean=(_number(params["control_mean"],
                              "parameters.control_mean")
                      if "control_mean" in params else None),
        stop_tol=compute["stop_tol"], seed=compute["seed"],
        n_sims=compute["n_sims"], workers=compute["workers"])
    return two_arm.validate_spec(spec)


_FAMILIES = {f.value: f for f in mcpmod.ModelFamily}


def _parse_model(block: dict, path: str) -> mcpmod.DoseResponseModel:
    _check_keys(block, {"family", "placebo_effect", "max_effect",
                        "guesstimates"}, path)
    family = _enum(_require(block, "family", path), _FAMILIES,
                   f"{path}.family")
    guesses = block.get("guesstimates", {})
    if not isinstance(guesses, dict):
        raise ValidationError("guesstimates must be an object",
                              path=f"{path}.guesstimates")
    try:
        return mcpmod.DoseResponseModel(
            family=family,
            placebo_effect=_number(_require(block, "placebo_effect", path),
                                   f"{path}.placebo_effect"),
            max_effect=_number(_require(block, "max_effect", path),
                               f"{path}.max_effect"),
            guesstimates={k: _number(v, f"{path}.guesstimates.{k}")
                          for k, v in guesses.items()})
    except ValidationError as e:
        if e.path is None:
            e.path = path
        raise


def _parse_multi_arm(doc: dict, rules: RuleSet, framework: Framework,
                     compute: dict) -> mcpmod.MultiArmSpec:
    if framework is Framework.BAYESIAN:
        raise ValidationError(
            "the multi-arm (dose-finding) design supports the frequentist "
            "framework only", path="framework")
    endpoint = _enum(_require(doc, "endpoint", "$"),
                     {"binary": mcpmod.MultiArmEndpoint.BINARY,
                      "normal": mcpmod.MultiArmEndpoint.NORMAL}, "endpoint")
    params = doc.get("parameters", {})
    _check_keys(params, {"doses", "n_per_arm", "sigma", "alpha",
                         "target_effect", "candidate_models", "true_model",
                         "critical_draws"}, "parameters")
    models = _require(params, "candidate_models", "parameters")
    if not isinstance(models, list) or not models:
        raise ValidationError("candidate_models must be a nonempty list",
                              path="parameters.candidate_models")
    spec = mcpmod.MultiArmSpec(
        doses=[_number(d, "parameters.doses")
               for d in _require(params, "doses", "parameters")],
        n_per_arm=[_int(n, "parameters.n_per_arm")
                   for n in _require(params, "n_per_arm", "parameters")],
        endpoint=endpoint,
        candidate_models=[_parse_model(m, f"parameters.candidate_models[{i}]")
                          for i, m in enumerate(models)],
        alpha=_number(_require(params, "alpha", "parameters"),
                      "parameters.alpha"),
        target_effect=_number(_require(params, "target_effect", "parameters"),
                              "parameters.target_effect"),
        rules=rules,
        true_model=_parse_model(_require(params, "true_model", "parameters"),
                                "parameters.true_model"),
        sigma=(_number(params["sigma"], "parameters.sigma")
               if "sigma" in params else None),
        n_sims=compute["n_sims"], seed=compute["seed"],
        workers=compute["workers"],
        critical_draws=_int(params.get("critical_draws", 200_000),
                            "parameters.critical_draws"))
    return mcpmod.validate_spec(spec)


def _parse_correlated(doc: dict, rules: RuleSet, framework: Framework,
                      compute: dict) -> tuple[object, RuleSet]:
    endpoint = _require(doc, "endpoint", "$")
    if endpoint not in ("binary", "normal"):
        raise ValidationError("correlated endpoint must be binary or normal",
                              path="endpoint")
    params = doc.get("parameters", {})
    rules_y_block = _require(doc, "rules_y", "$")
    rules_y, _, _ = _parse_rules(rules_y_block, "rules_y", hr_allowed=False)
    validate_rule_set(rules_y, rate_scale=endpoint == "binary")
    joint_go = _enum(params.get("joint_go", "both"),
                     {"both": correlated.JointGo.BOTH,
                      "either": correlated.JointGo.EITHER},
                     "parameters.joint_go")
    if endpoint == "binary":
        _check_keys(params, {"n", "cells", "marginals", "joint_go", "prior_x",
                             "prior_y"}, "parameters")
        if "cells" in params:
            cells = params["cells"]
            if not isinstance(cells, list) or len(cells) != 4:
                raise ValidationError(
                    "cells must be [p00, p01, p10, p11]",
                    path="parameters.cells")
            cells = tuple(_number(c, "parameters.cells") for c in cells)
        elif "marginals" in params:
            m = params["marginals"]
            _check_keys(m, {"px", "py", "rho"}, "parameters.marginals")
            cells = correlated.cells_from_marginals(
                _number(_require(m, "px", "parameters.marginals"),
                        "parameters.marginals.px"),
                _number(_require(m, "py", "parameters.marginals"),
                        "parameters.marginals.py"),
                _number(_require(m, "rho", "parameters.marginals"),
                        "parameters.marginals.rho"))
        else:
            raise ValidationError("provide cells or marginals",
                                  path="parameters")
        spec = correlated.CorrelatedBinarySpec(
            n=_int(_require(params, "n", "parameters"), "parameters.n"),
            cells=cells, rules_x=rules, rules_y=rules_y, joint_go=joint_go,
            framework=framework,
            prior_x=(_parse_prior(params["prior_x"], "parameters.prior_x")
                     if "prior_x" in params else None),
            prior_y=(_parse_prior(params["prior_y"], "parameters.prior_y")
                     if "prior_y" in params else None),
            seed=compute["seed"], n_sims=compute["n_sims"],
            workers=compute["workers"])
        return correlated.validate_binary_spec(spec), rules_y
    _check_keys(params, {"n", "means", "sds", "rho", "joint_go",
                         "known_variance", "prior_x", "prior_y"},
                "parameters")
    means = _require(params, "means", "parameters")
    sds = _require(params, "sds", "parameters")
    for name, v in (("means", means), ("sds", sds)):
        if not isinstance(v, list) or len(v) != 2:
            raise ValidationError(f"{name} must be a pair [x, y]",
                                  path=f"parameters.{name}")
    spec = correlated.CorrelatedNormalSpec(
        n=_int(_require(params, "n", "parameters"), "parameters.n"),
        means=(_number(means[0], "parameters.means"),
               _number(means[1], "parameters.means")),
        sds=(_number(sds[0], "parameters.sds"),
             _number(sds[1], "parameters.sds")),
        rho=_number(_require(params, "rho", "parameters"), "parameters.rho"),
        rules_x=rules, rules_y=rules_y, joint_go=joint_go,
        framework=framework,
        known_variance=bool(params.get("known_variance", True)),
        prior_x=(_parse_prior(params["prior_x"], "parameters.prior_x")
                 if "prior_x" in params else None),
        prior_y=(_parse_prior(params["prior_y"], "parameters.prior_y")
                 if "prior_y" in params else None),
        seed=compute["seed"], n_sims=compute["n_sims"],
        workers=compute["workers"])
    return correlated.validate_normal_spec(spec), rules_y


# ------------------------------------------------------------- top level ----

_TOP_KEYS = {"design", "endpoint", "framework", "rules", "rules_y",
             "parameters", "compute", "interim"}


def parse_config(document: bytes | str) -> DesignConfig:
    if isinstance(document, bytes):
        document = document.decode("utf-8", errors="replace")
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}",
                         path=f"line {e.lineno} column {e.colno}") from e
    if not isinstance(doc, dict):
        raise ParseError("top-level document must be an object")
    _check_keys(doc, _TOP_KEYS, "$")
    design = _require(doc, "design", "$")
    if design not in _DESIGNS:
        raise ValidationError(f"design must be one of {_DESIGNS}",
                              path="design")
    if design != "correlated" and "rules_y" in doc:
        raise ValidationError("rules_y applies to correlated designs only",
                              code="UNKNOWN_FIELD", path="rules_y")
    framework = _enum(_require(doc, "framework", "$"),
                      {"frequentist": Framework.FREQUENTIST,
                       "bayesian": Framework.BAYESIAN}, "framework")
    hr_allowed = (design == "two_arm"
                  and doc.get("endpoint") == "survival_hr")
    rules, label, converted = _parse_rules(_require(doc, "rules", "$"),
                                           "rules", hr_allowed=hr_allowed)
    compute = _parse_compute(doc.get("compute", {}), design)
    pivots = _parse_pivots(doc.get("parameters", {}).get("oc_pivots", {}),
                           "parameters.oc_pivots")

    rules_y = None
    if design == "single_arm":
        spec = _parse_single_arm(doc, rules, framework, compute)
    elif design == "two_arm":
        spec = _parse_two_arm(doc, rules, framework, compute)
    elif design == "multi_arm":
        spec = _parse_multi_arm(doc, rules, framework, compute)
    else:
        spec, rules_y = _parse_correlated(doc, rules, framework, compute)

    interim_spec = None
    if "interim" in doc:
        if design in ("multi_arm", "correlated"):
            raise ValidationError(
                "interim analysis is supported for single-arm and two-arm "
                "designs only", code="UNSUPPORTED_INTERIM", path="interim")
        interim_spec = _parse_interim(doc["interim"], spec)
        interim.validate_spec(interim_spec)

    echo = _normalized_echo(doc, compute, converted)
    return DesignConfig(design=design, spec=spec, interim_spec=interim_spec,
                        pivots=pivots, label=label, rules_y=rules_y,
                        echo=echo)


def _normalized_echo(doc: dict, compute: dict, converted: bool) -> dict:
    echo = json.loads(json.dumps(doc))  # deep copy of plain JSON data
    echo["compute"] = compute
    if converted:
        rules = echo["rules"]
        for key in ("go", "nogo"):
            for crit in rules[key]["criteria"]:
                crit["threshold"] = math.exp(crit["threshold"])
        rules["threshold_scale"] = "hazard_ratio"
        rules["threshold_scale_converted"] = True
    return echo


# ------------------------------------------------------------- dispatch -----

_DENSE_GRID = 101


def _dense_grid(spec_true_values: list[float], rate_scale: bool) -> list[float]:
    lo, hi = min(spec_true_values), max(spec_true_values)
    if lo == hi:
        pad = 0.1 if not rate_scale else min(0.1, lo, 1.0 - hi)
        lo, hi = lo - pad, hi + pad
    if rate_scale:
        lo, hi = max(lo, 0.0), min(hi, 1.0)
    return list(np.linspace(lo, hi, _DENSE_GRID))


def _analytic_dense_oc(cfg: DesignConfig) -> OperatingCharacteristics | None:
    """OC over a fine true-value grid for the analytically exact paths."""
    spec = cfg.spec
    if cfg.interim_spec is not None:
        return None
    if cfg.design == "single_arm":
        if spec.endpoint is single_arm.SingleArmEndpoint.NORMAL_UNKNOWN_VAR:
            return None
        rate = spec.endpoint in (single_arm.SingleArmEndpoint.BINARY,
                                 single_arm.SingleArmEndpoint.SURVIVAL)
        dense = dataclasses.replace(
            spec, true_values=_dense_grid(spec.true_values, rate))
        return single_arm.oc(dense)
    if cfg.design == "two_arm":
        exact = (spec.framework is Framework.FREQUENTIST
                 and spec.endpoint is not two_arm.TwoArmEndpoint.
                 NORMAL_DIFF_UNKNOWN)
        if not exact:
            return None
        dense = dataclasses.replace(
            spec, true_values=_dense_grid(spec.true_values, False))
        return two_arm.oc(dense)
    return None


def dispatch(cfg: DesignConfig) -> reporting.RunReport:
    t0 = time.monotonic()
    spec = cfg.spec
    extra_warnings: list[str] = []
    if cfg.design == "multi_arm":
        result = mcpmod.simulate_oc(spec)
        if result.fit_failures:
            extra_warnings.append(f"FIT_FAILURE:{result.fit_failures}")
        oc = OperatingCharacteristics([reporting.OCRow(
            n=sum(spec.n_per_arm), true_value=spec.true_model.max_effect,
            p_go=result.p_go, p_nogo=result.p_nogo,
            p_inconclusive=result.p_inconclusive, mc_se=result.mc_se)])
        report = reporting.build_report(
            cfg.echo, spec.rules, cfg.label, [], oc, pivots=cfg.pivots,
            seed=spec.seed, n_sims=spec.n_sims,
            extra_warnings=extra_warnings,
            wall_time_s=time.monotonic() - t0)
        report.spec_echo.setdefault("diagnostics", {})
        report.spec_echo["diagnostics"] = {
            "poc_rate": result.poc_rate,
            "mean_target_dose": result.mean_target_dose,
            "critical_value": result.critical_value,
            "fit_failures": result.fit_failures}
        return report
    if cfg.design == "correlated":
        cuts = correlated.marginal_cutoffs(spec)
        oc = correlated.joint_oc(spec)
        report = reporting.build_report(
            cfg.echo, spec.rules_x, cfg.label, [cuts["x"], cuts["y"]], oc,
            pivots=cfg.pivots, seed=spec.seed, n_sims=spec.n_sims,
            wall_time_s=time.monotonic() - t0)
        return report
    module = single_arm if cfg.design == "single_arm" else two_arm
    if cfg.interim_spec is not None:
        cuts = module.cutoffs(spec)
        oc = interim.simulate_interim_oc(cfg.interim_spec)
        n_sims = cfg.interim_spec.n_sims
    else:
        cuts = module.cutoffs(spec)
        oc = module.oc(spec, cuts)
        n_sims = spec.n_sims
    return reporting.build_report(
        cfg.echo, spec.rules, cfg.label, cuts, oc, pivots=cfg.pivots,
        dense_oc=_analytic_dense_oc(cfg), seed=spec.seed, n_sims=n_sims,
        wall_time_s=time.monotonic() - t0)


# ----------------------------------------------------------- cost model -----

def estimate_cost_seconds(cfg: DesignConfig) -> float:
    """Coarse up-front runtime estimate used by the service budget gate."""
    spec = cfg.spec
    if cfg.design == "multi_arm":
        # dominated by one nonlinear fit per PoC-passing replicate
        return 1.0 + 1.5e-3 * spec.n_sims
    per_rep = 0.0
    scenarios = 1
    if cfg.design == "single_arm":
        scenarios = len(spec.sample_sizes) * len(spec.true_values)
        if (spec.endpoint is single_arm.SingleArmEndpoint.NORMAL_UNKNOWN_VAR):
            per_rep = 2e-4
    elif cfg.design == "two_arm":
        pairs = spec.events if spec.events else spec.arms
        scenarios = len(pairs) * len(spec.true_values)
        if spec.framework is Framework.BAYESIAN:
            per_rep = (1e-3 if spec.endpoint in
                       (two_arm.TwoArmEndpoint.BINARY_DIFF,
                        two_arm.TwoArmEndpoint.NORMAL_DIFF_UNKNOWN)
                       else 5e-5)
    else:  # correlated
        if (isinstance(spec, correlated.CorrelatedNormalSpec)
                and not spec.known_variance):
            per_rep = 2e-4
    base = 0.5
    cost = base + scenarios * per_rep * spec.n_sims
    if cfg.interim_spec is not None:
        cost += scenarios * 3e-4 * cfg.interim_spec.n_sims
    return cost
