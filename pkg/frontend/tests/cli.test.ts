import { existsSync, mkdtempSync, readFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { main } from "../src/cli.js";

const fixture = (name: string) => join(__dirname, "fixtures", name);

describe("plotkit command", () => {
  it("renders all three figure kinds end to end", () => {
    const dir = mkdtempSync(join(tmpdir(), "plotkit-"));
    const jobs: Array<[string, string]> = [
      ["scatter", "summary_2m3r.csv"],
      ["histogram", "sim_histogram.csv"],
      ["convergence", "convergence.csv"],
    ];
    for (const [kind, csv] of jobs) {
      const out = join(dir, `${kind}.svg`);
      expect(main([kind, "--in", fixture(csv), "--out", out])).toBe(0);
      expect(existsSync(out)).toBe(true);
      expect(readFileSync(out, "utf8")).toContain("</svg>");
    }
  });

  it("passes filters and caps through", () => {
    const dir = mkdtempSync(join(tmpdir(), "plotkit-"));
    const out = join(dir, "h.svg");
    expect(
      main([
        "histogram",
        "--in",
        fixture("sim_histogram.csv"),
        "--out",
        out,
        "--exclude",
        "OCBA,ConstNoCrn",
        "--bin-width",
        "50",
      ]),
    ).toBe(0);
    const svg = readFileSync(out, "utf8");
    expect(svg).not.toContain("OCBA");
    expect(svg).toContain("bin width 50");
  });

  it("fails with exit code 2 on usage and schema problems", () => {
    const dir = mkdtempSync(join(tmpdir(), "plotkit-"));
    expect(main(["pie", "--in", "x", "--out", "y"])).toBe(2);
    expect(main(["scatter"])).toBe(2);
    expect(
      main([
        "scatter",
        "--in",
        fixture("sim_histogram.csv"), // wrong schema for a scatter
        "--out",
        join(dir, "bad.svg"),
      ]),
    ).toBe(2);
  });

  it("fails with exit code 3 on filesystem problems", () => {
    expect(
      main(["scatter", "--in", "/nonexistent/summary.csv", "--out", "/tmp/x.svg"]),
    ).toBe(3);
  });
});
