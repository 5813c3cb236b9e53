import { describe, expect, it } from "vitest";

import { cutoffCsv, downloadFiles, ocCsv } from "../src/download.js";
import type { CutoffRow, OcRow, RunReport } from "../src/types.js";

// golden rows captured from the backend's CSV serializer for the bundled
// single-arm binary example (seed 425)
const EXAMPLE_1_OC: OcRow[] = [
  {
    n: 25,
    true_value: 0.15,
    p_go: 0.025467638521621046,
    p_nogo: 0.8384845968053984,
    p_inconclusive: 0.13604776467298052,
    mc_se: null,
    p_stop_interim: null,
  },
  {
    n: 25,
    true_value: 0.2,
    p_go: 0.10912279600000001,
    p_nogo: 0.6166894117999999,
    p_inconclusive: 0.2741877922,
    mc_se: null,
    p_stop_interim: null,
  },
];

const EXAMPLE_1_CUTOFFS: CutoffRow[] = [
  {
    n: 25,
    go_boundary: 8,
    nogo_boundary: 5,
    overlap: false,
    boundary_statistic: "RESPONDERS",
    warnings: [],
  },
];

describe("CSV downloads", () => {
  it("operating-characteristics CSV matches the backend byte for byte", () => {
    expect(ocCsv(EXAMPLE_1_OC)).toBe(
      "n,true_value,p_go,p_nogo,p_inconclusive,mc_se\n" +
        "25,0.15,0.02546763852,0.8384845968,0.1360477647,\n" +
        "25,0.2,0.109122796,0.6166894118,0.2741877922,\n",
    );
  });

  it("boundary CSV matches the backend byte for byte", () => {
    expect(cutoffCsv(EXAMPLE_1_CUTOFFS)).toBe(
      "n,go_boundary,nogo_boundary,overlap,boundary_statistic,warnings\n" +
        "25,8,5,false,RESPONDERS,\n",
    );
  });

  it("interim stop column is appended only when present", () => {
    const rows: OcRow[] = [
      { ...EXAMPLE_1_OC[0]!, mc_se: 0.003, p_stop_interim: 0.25 },
    ];
    const csv = ocCsv(rows);
    expect(csv.split("\n")[0]).toBe(
      "n,true_value,p_go,p_nogo,p_inconclusive,mc_se,p_stop_interim",
    );
    expect(csv).toContain(",0.003,0.25\n");
  });
});

describe("JSON download", () => {
  it("re-emits the exact response bytes untouched", () => {
    const raw = new TextEncoder().encode('{"anything": "at all"}\n');
    const report = {
      oc_rows: EXAMPLE_1_OC,
      cutoffs: EXAMPLE_1_CUTOFFS,
    } as unknown as RunReport;
    const files = downloadFiles(report, raw);
    const json = files.find((f) => f.name === "report.json");
    expect(json?.bytes).toBe(raw);
    expect(files.map((f) => f.name).sort()).toEqual([
      "cutoffs.csv",
      "oc.csv",
      "report.json",
    ]);
  });
});
