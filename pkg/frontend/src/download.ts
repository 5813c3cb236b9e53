/** Download payloads. The JSON download re-emits the service response bytes
 * untouched; the CSV tables follow the same header order and 10-significant-
 * digit float formatting as the engine's own CSV serializer, so a downloaded
 * table matches the command-line output for the same config and seed. */

import type { CutoffRow, OcRow, RunReport } from "./types.js";
import { formatCsv } from "./format.js";

export const OC_CSV_HEADER = [
  "n",
  "true_value",
  "p_go",
  "p_nogo",
  "p_inconclusive",
  "mc_se",
];

export const CUTOFF_CSV_HEADER = [
  "n",
  "go_boundary",
  "nogo_boundary",
  "overlap",
  "boundary_statistic",
  "warnings",
];

function ocRowCells(row: OcRow, withInterim: boolean): string[] {
  const cells = [
    formatCsv(row.n),
    formatCsv(row.true_value),
    formatCsv(row.p_go),
    formatCsv(row.p_nogo),
    formatCsv(row.p_inconclusive),
    formatCsv(row.mc_se),
  ];
  if (withInterim) cells.push(formatCsv(row.p_stop_interim));
  return cells;
}

export function ocCsv(rows: OcRow[]): string {
  const withInterim = rows.some((r) => r.p_stop_interim !== null);
  const header = withInterim
    ? [...OC_CSV_HEADER, "p_stop_interim"]
    : OC_CSV_HEADER;
  const lines = [header.join(",")];
  for (const row of rows) lines.push(ocRowCells(row, withInterim).join(","));
  return lines.join("\n") + "\n";
}

export function cutoffCsv(rows: CutoffRow[]): string {
  const lines = [CUTOFF_CSV_HEADER.join(",")];
  for (const row of rows) {
    lines.push(
      [
        formatCsv(row.n),
        formatCsv(row.go_boundary),
        formatCsv(row.nogo_boundary),
        row.overlap ? "true" : "false",
        row.boundary_statistic,
        row.warnings.join(";"),
      ].join(","),
    );
  }
  return lines.join("\n") + "\n";
}

export interface DownloadFile {
  name: string;
  mimeType: string;
  bytes: Uint8Array;
}

/** All downloadable artifacts for a completed run. */
export function downloadFiles(
  report: RunReport,
  rawResponse: Uint8Array,
): DownloadFile[] {
  const enc = new TextEncoder();
  return [
    { name: "report.json", mimeType: "application/json", bytes: rawResponse },
    {
      name: "oc.csv",
      mimeType: "text/csv",
      bytes: enc.encode(ocCsv(report.oc_rows)),
    },
    {
      name: "cutoffs.csv",
      mimeType: "text/csv",
      bytes: enc.encode(cutoffCsv(report.cutoffs)),
    },
  ];
}

/** Trigger a browser download (no-op outside a DOM environment). */
export function saveFile(file: DownloadFile): void {
  if (typeof document === "undefined") return;
  const buffer = file.bytes.buffer.slice(
    file.bytes.byteOffset,
    file.bytes.byteOffset + file.bytes.byteLength,
  ) as ArrayBuffer;
  const blob = new Blob([buffer], { type: file.mimeType });
  const url = URL.createObjectURL(blob);
  const a = document.createElement("a");
  a.href = url;
  a.download = file.name;
  a.click();
  URL.revokeObjectURL(url);
}
