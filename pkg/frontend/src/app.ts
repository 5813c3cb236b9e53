/** DOM wiring for the design-exploration UI. All statistics come from the
 * evaluation service; this module only collects form input, previews rule
 * strings, submits, and renders the returned tables and charts. */

import { ApiClient, ApiError } from "./api.js";
import { renderAllCharts } from "./charts.js";
import { compareRuns, settingsDiff } from "./compare.js";
import { downloadFiles, saveFile } from "./download.js";
import {
  FormState,
  canSubmit,
  defaultFormState,
  toConfig,
  validateForm,
  visibleSections,
} from "./formState.js";
import { formatSig } from "./format.js";
import { renderRuleStrings } from "./ruleText.js";
import type { RulesConfig, RunReport } from "./types.js";

function esc(s: string): string {
  return s
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

function ocTable(report: RunReport): string {
  const withInterim = report.oc_rows.some((r) => r.p_stop_interim !== null);
  const head = [
    "n",
    "true value",
    "P(Go)",
    "P(No-Go)",
    "P(inconclusive)",
    ...(report.oc_rows.some((r) => r.mc_se !== null) ? ["MC SE"] : []),
    ...(withInterim ? ["P(stop at interim)"] : []),
  ];
  const rows = report.oc_rows.map((r) => {
    const cells = [
      String(r.n),
      formatSig(r.true_value),
      formatSig(r.p_go),
      formatSig(r.p_nogo),
      formatSig(r.p_inconclusive),
    ];
    if (head.includes("MC SE")) {
      cells.push(r.mc_se === null ? "—" : formatSig(r.mc_se));
    }
    if (withInterim) {
      cells.push(
        r.p_stop_interim === null ? "—" : formatSig(r.p_stop_interim),
      );
    }
    return `<tr>${cells.map((c) => `<td>${esc(c)}</td>`).join("")}</tr>`;
  });
  return `<table class="oc-table"><thead><tr>${head
    .map((h) => `<th>${esc(h)}</th>`)
    .join("")}</tr></thead><tbody>${rows.join("")}</tbody></table>`;
}

function cutoffTable(report: RunReport): string {
  const rows = report.cutoffs.map(
    (c) =>
      `<tr${c.overlap ? ' class="overlap"' : ""}><td>${c.n}</td>` +
      `<td>${c.go_boundary === null ? "—" : formatSig(c.go_boundary)}</td>` +
      `<td>${c.nogo_boundary === null ? "—" : formatSig(c.nogo_boundary)}</td>` +
      `<td>${c.overlap ? "yes" : "no"}</td><td>${esc(c.boundary_statistic)}</td></tr>`,
  );
  return (
    `<table class="cutoff-table"><thead><tr><th>n</th><th>Go boundary</th>` +
    `<th>No-Go boundary</th><th>overlap</th><th>statistic</th></tr></thead>` +
    `<tbody>${rows.join("")}</tbody></table>`
  );
}

export class App {
  state: FormState = defaultFormState();
  private readonly client: ApiClient;
  private readonly root: HTMLElement;

  constructor(root: HTMLElement, client: ApiClient = new ApiClient()) {
    this.root = root;
    this.client = client;
  }

  /** Current rule-string preview (always matches the service's rendering). */
  preview(): { go: string; nogo: string; goY?: string; nogoY?: string } {
    const config = toConfig(this.state);
    const main = renderRuleStrings(config.rules);
    if (!config.rules_y) return main;
    const second = renderRuleStrings(config.rules_y as RulesConfig);
    return { ...main, goY: second.go, nogoY: second.nogo };
  }

  async submit(): Promise<void> {
    if (!canSubmit(this.state)) {
      this.renderErrors();
      return;
    }
    this.state.requestInFlight = true;
    this.render();
    try {
      const { report, raw } = await this.client.evaluate(toConfig(this.state));
      this.state.previousReport = this.state.lastReport;
      this.state.lastReport = report;
      this.state.lastRawResponse = raw;
    } catch (err) {
      this.renderServiceError(err);
      return;
    } finally {
      this.state.requestInFlight = false;
    }
    this.render();
  }

  cancel(): void {
    this.client.cancel();
    this.state.requestInFlight = false;
    this.render();
  }

  download(name: string): void {
    if (!this.state.lastReport || !this.state.lastRawResponse) return;
    const file = downloadFiles(
      this.state.lastReport,
      this.state.lastRawResponse,
    ).find((f) => f.name === name);
    if (file) saveFile(file);
  }

  private renderErrors(): void {
    const box = this.root.querySelector(".form-errors");
    if (!box) return;
    box.innerHTML = validateForm(this.state)
      .map((e) => `<p class="field-error">${esc(e.path)}: ${esc(e.message)}</p>`)
      .join("");
  }

  private renderServiceError(err: unknown): void {
    const box = this.root.querySelector(".service-error");
    if (!box) return;
    if (err instanceof ApiError) {
      const hint =
        err.code === "TOO_EXPENSIVE" && err.suggestedNSims !== undefined
          ? `<p class="hint">try n_sims = ${err.suggestedNSims}</p>`
          : "";
      box.innerHTML = `<p class="error">${esc(err.code)} at ${esc(err.path)}: ${esc(err.message)}</p>${hint}`;
    } else if ((err as Error)?.name === "AbortError") {
      box.innerHTML = `<p class="hint">request cancelled</p>`;
    } else {
      box.innerHTML = `<p class="error">${esc(String(err))}</p>`;
    }
  }

  render(): void {
    const sections = visibleSections(this.state);
    const preview = this.preview();
    const report = this.state.lastReport;
    const overlap =
      report?.cutoffs.some((c) => c.overlap) ||
      report?.warnings.some((w) => w.startsWith("OVERLAP"));
    const parts: string[] = [
      `<section class="rule-preview"><h2>Decision rules</h2>`,
      `<p class="rule go-rule">Go: ${esc(preview.go)}</p>`,
      `<p class="rule nogo-rule">No-Go: ${esc(preview.nogo)}</p>`,
      preview.goY
        ? `<p class="rule go-rule">Go (endpoint 2): ${esc(preview.goY)}</p>` +
          `<p class="rule nogo-rule">No-Go (endpoint 2): ${esc(preview.nogoY ?? "")}</p>`
        : "",
      `</section>`,
      `<div class="form-errors"></div><div class="service-error"></div>`,
      `<section class="panels" data-prior="${sections.prior}" data-interim="${sections.interimPanel}" data-scale="${sections.thresholdScale}"></section>`,
    ];
    if (report) {
      if (overlap) {
        parts.push(
          `<div class="warning-banner">Decision regions overlap: the dominated rule decides the contested range.</div>`,
        );
      }
      for (const w of report.warnings) {
        parts.push(`<div class="warning">${esc(w)}</div>`);
      }
      parts.push(
        `<section class="results">`,
        cutoffTable(report),
        ocTable(report),
        ...Object.values(renderAllCharts(report)),
        `</section>`,
      );
      if (this.state.previousReport) {
        const deltas = compareRuns(this.state.previousReport, report);
        const diff = settingsDiff(this.state.previousReport, report);
        parts.push(
          `<section class="compare"><h2>Versus previous run</h2>`,
          `<p>${diff.map(esc).join("<br>") || "same settings"}</p>`,
          `<table><thead><tr><th>n</th><th>true value</th><th>ΔP(Go)</th><th>ΔP(No-Go)</th></tr></thead><tbody>`,
          ...deltas.map(
            (d) =>
              `<tr><td>${d.n}</td><td>${formatSig(d.true_value)}</td>` +
              `<td>${formatSig(d.p_go_delta)}</td><td>${formatSig(d.p_nogo_delta)}</td></tr>`,
          ),
          `</tbody></table></section>`,
        );
      }
    }
    this.root.innerHTML = parts.join("\n");
  }
}

export function mount(selector = "#app"): App | null {
  if (typeof document === "undefined") return null;
  const root = document.querySelector<HTMLElement>(selector);
  if (!root) return null;
  const app = new App(root);
  app.render();
  return app;
}
