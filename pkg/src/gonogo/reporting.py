"""Report assembly and serialization.

A run produces three artifacts: a cutoff table, an OC table with overlap
warnings, and three plot-series families (boundaries vs sample size, OC vs
sample size at a fixed true value, OC vs true value at a fixed sample size).
JSON serialization is deterministic — the CLI and the HTTP service share it
byte for byte — and CSV output uses a fixed column order with 10 significant
digits.
"""

import csv
import io
import json
from dataclasses import dataclass, field
from enum import Enum

from . import __version__
from .designs.common import CutoffResult, OCRow, OperatingCharacteristics
from .errors import ValidationError
from .rules import RuleSet, render_rule_text


class PlotKind(Enum):
    CUTOFF_VS_N = "cutoff_vs_n"
    OC_VS_N = "oc_vs_n"
    OC_VS_TRUE_VALUE = "oc_vs_true_value"


@dataclass
class PlotSeries:
    kind: PlotKind
    x: list[float]
    series: dict[str, list[float | None]]
    fixed_context: dict

    def __post_init__(self):
        for name, ys in self.series.items():
            if len(ys) != len(self.x):
                raise ValidationError(
                    f"plot series {name!r} length does not match x")


@dataclass
class RunReport:
    spec_echo: dict
    rule_strings: tuple[str, str]
    cutoffs: list[CutoffResult]
    oc_rows: list[OCRow]
    warnings: list[str]
    plot_series: list[PlotSeries]
    provenance: dict = field(default_factory=dict)


OC_CSV_HEADER = ["n", "true_value", "p_go", "p_nogo", "p_inconclusive",
                 "mc_se"]
CUTOFF_CSV_HEADER = ["n", "go_boundary", "nogo_boundary", "overlap",
                     "boundary_statistic", "warnings"]


def collect_warnings(cutoffs: list[CutoffResult],
                     extra: list[str] | None = None) -> list[str]:
    out = []
    if any(c.overlap for c in cutoffs):
        out.append("OVERLAP")
    seen = set(out)
    for c in cutoffs:
        for w in c.warnings:
            tag = f"UNSATISFIABLE_RULE:{w}"
            if tag not in seen:
                seen.add(tag)
                out.append(tag)
    for w in extra or []:
        if w not in seen:
            seen.add(w)
            out.append(w)
    return out


def make_plot_series(cutoffs: list[CutoffResult],
                     oc: OperatingCharacteristics,
                     pivots: dict | None = None,
                     dense_oc: OperatingCharacteristics | None = None
                     ) -> list[PlotSeries]:
    """The three plot families.

    ``pivots`` holds {"fixed_n", "fixed_true_value"}; missing pivots default
    to the first cutoff's n and the first scenario value.  ``dense_oc``, when
    provided by an analytic caller, supplies a fine true-value grid at the
    fixed n; otherwise the scenario values themselves are used.
    """
    pivots = pivots or {}
    ns = [c.n for c in cutoffs]
    out = [PlotSeries(
        kind=PlotKind.CUTOFF_VS_N, x=[float(n) for n in ns],
        series={"go_boundary": [_maybe_float(c.go_boundary) for c in cutoffs],
                "nogo_boundary": [_maybe_float(c.nogo_boundary)
                                  for c in cutoffs]},
        fixed_context={"boundary_statistic": cutoffs[0].boundary_statistic
                       if cutoffs else None})]
    rows = oc.rows
    fixed_tv = pivots.get("fixed_true_value",
                          rows[0].true_value if rows else None)
    sub = [r for r in rows if r.true_value == fixed_tv]
    out.append(PlotSeries(
        kind=PlotKind.OC_VS_N, x=[float(r.n) for r in sub],
        series={"p_go": [r.p_go for r in sub],
                "p_nogo": [r.p_nogo for r in sub],
                "p_inconclusive": [r.p_inconclusive for r in sub]},
        fixed_context={"true_value": fixed_tv}))
    fixed_n = pivots.get("fixed_n", ns[0] if ns else None)
    src = dense_oc.rows if dense_oc is not None else rows
    sub = [r for r in src if r.n == fixed_n]
    out.append(PlotSeries(
        kind=PlotKind.OC_VS_TRUE_VALUE, x=[r.true_value for r in sub],
        series={"p_go": [r.p_go for r in sub],
                "p_nogo": [r.p_nogo for r in sub],
                "p_inconclusive": [r.p_inconclusive for r in sub]},
        fixed_context={"n": fixed_n}))
    return out


def build_report(spec_echo: dict, rules: RuleSet, effect_label: str,
                 cutoffs: list[CutoffResult], oc: OperatingCharacteristics,
                 *, pivots: dict | None = None,
                 dense_oc: OperatingCharacteristics | None = None,
                 seed: int, n_sims: int,
                 extra_warnings: list[str] | None = None,
                 wall_time_s: float | None = None) -> RunReport:
    known_n = {c.n for c in cutoffs}
    if known_n and any(r.n not in known_n for r in oc.rows):
        raise ValidationError(
            "OC rows reference sample sizes absent from the cutoff table",
            code="INCONSISTENT_INPUTS")
    provenance = {"seed": seed, "n_sims": n_sims, "version": __version__}
    if wall_time_s is not None:
        provenance["wall_time_s"] = wall_time_s
    return RunReport(
        spec_echo=spec_echo,
        rule_strings=render_rule_text(rules, effect_label),
        cutoffs=list(cutoffs),
        oc_rows=list(oc.rows),
        warnings=collect_warnings(cutoffs, extra_warnings),
        plot_series=make_plot_series(cutoffs, oc, pivots, dense_oc),
        provenance=provenance)


# ------------------------------------------------------------ serializers ---

def _maybe_float(v):
    return None if v is None else float(v)


def report_document(report: RunReport) -> dict:
    """JSON-ready dict mirroring the report fields.  Wall time is dropped so
    identical runs produce identical bytes."""
    provenance = {k: v for k, v in report.provenance.items()
                  if k != "wall_time_s"}
    return {
        "spec_echo": report.spec_echo,
        "rule_strings": {"go": report.rule_strings[0],
                         "nogo": report.rule_strings[1]},
        "cutoffs": [{
            "n": c.n, "go_boundary": _maybe_float(c.go_boundary),
            "nogo_boundary": _maybe_float(c.nogo_boundary),
            "overlap": c.overlap, "boundary_statistic": c.boundary_statistic,
            "warnings": list(c.warnings)} for c in report.cutoffs],
        "oc_rows": [{
            "n": r.n, "true_value": r.true_value, "p_go": r.p_go,
            "p_nogo": r.p_nogo, "p_inconclusive": r.p_inconclusive,
            "mc_se": r.mc_se, "p_stop_interim": r.p_stop_interim}
            for r in report.oc_rows],
        "warnings": list(report.warnings),
        "plot_series": [{
            "kind": s.kind.value, "x": list(s.x),
            "series": {k: list(v) for k, v in s.series.items()},
            "fixed_context": s.fixed_context} for s in report.plot_series],
        "provenance": provenance,
    }


def serialize_json(report: RunReport) -> bytes:
    doc = report_document(report)
    return (json.dumps(doc, indent=2, sort_keys=False) + "\n").encode()


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".10g")
    return str(v)


def csv_tables(report: RunReport) -> dict[str, bytes]:
    """One CSV file per table, fixed column order, 10 significant digits."""
    out = {}

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CUTOFF_CSV_HEADER)
    for c in report.cutoffs:
        w.writerow([_fmt(c.n), _fmt(_maybe_float(c.go_boundary)),
                    _fmt(_maybe_float(c.nogo_boundary)), _fmt(c.overlap),
                    c.boundary_statistic, ";".join(c.warnings)])
    out["cutoffs.csv"] = buf.getvalue().encode()

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header = list(OC_CSV_HEADER)
    has_interim = any(r.p_stop_interim is not None for r in report.oc_rows)
    if has_interim:
        header.append("p_stop_interim")
    w.writerow(header)
    for r in report.oc_rows:
        row = [_fmt(r.n), _fmt(float(r.true_value)), _fmt(float(r.p_go)),
               _fmt(float(r.p_nogo)), _fmt(float(r.p_inconclusive)),
               _fmt(_maybe_float(r.mc_se))]
        if has_interim:
            row.append(_fmt(_maybe_float(r.p_stop_interim)))
        w.writerow(row)
    out["oc.csv"] = buf.getvalue().encode()

    for s in report.plot_series:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        names = list(s.series)
        w.writerow(["x"] + names)
        for i, x in enumerate(s.x):
            w.writerow([_fmt(float(x))]
                       + [_fmt(_maybe_float(s.series[k][i])) for k in names])
        out[f"plot_{s.kind.value}.csv"] = buf.getvalue().encode()
    return out


def serialize(report: RunReport, fmt: str) -> bytes:
    if fmt == "json":
        return serialize_json(report)
    if fmt == "csv":
        parts = []
        for name, data in csv_tables(report).items():
            parts.append(f"# {name}\n".encode() + data)
        return b"\n".join(parts)
    raise ValidationError(f"unknown serialization format {fmt!r}")
