import { describe, it, expect } from "vitest";
import { createHash } from "crypto";
import { mkdtempSync, writeFileSync, readFileSync, readdirSync } from "fs";
import { tmpdir } from "os";
import { join, dirname } from "path";
import { fileURLToPath } from "url";
import { buildFigure, FIGURES, UnknownFigure } from "../src/figures.js";
import { renderFigure } from "../src/svg.js";
import { MissingColumn, IoError } from "../src/csv.js";

const HERE = dirname(fileURLToPath(import.meta.url));
const GOLDEN_DIR = join(HERE, "fixtures", "golden");
const RUN_DIR = join(HERE, "fixtures", "run");

// SHA-256 of the SVG rendered from the fixed fixture in fixtures/golden.
// Regenerate deliberately (and review the diff) if the renderer changes:
//   node -e 'import("./dist/figures.js").then(async (f) => {
//     const { renderFigure } = await import("./dist/svg.js");
//     const { createHash } = await import("crypto");
//     const svg = renderFigure(f.buildFigure("fig_biomass_vs_mu", "tests/fixtures/golden"));
//     console.log(createHash("sha256").update(svg).digest("hex"));
//   })'
const GOLDEN_HASH = "4a8359e370e20b8bc31664906194cbbb487f92040227d9e26852a5fa76b8e5cd";

function sha256(text: string): string {
  return createHash("sha256").update(text).digest("hex");
}

describe("golden image", () => {
  it("renders the fixed fixture to a byte-identical SVG", () => {
    const svg = renderFigure(buildFigure("fig_biomass_vs_mu", GOLDEN_DIR));
    expect(sha256(svg)).toBe(GOLDEN_HASH);
  });
});

describe("figure registry", () => {
  it("knows exactly the six export suites", () => {
    expect(Object.keys(FIGURES).sort()).toEqual([
      "fig_biomass_vs_mu",
      "fig_bistable_ff",
      "fig_bistable_hetero",
      "fig_bistable_nfnf",
      "fig_profiles_vs_mu",
      "fig_profiles_vs_q",
    ]);
  });

  it("rejects unknown figure names", () => {
    expect(() => buildFigure("fig_nope", RUN_DIR)).toThrowError(UnknownFigure);
  });

  it("raises IoError when the input directory lacks the CSVs", () => {
    expect(() => buildFigure("fig_biomass_vs_mu", "/no/such/dir")).toThrowError(IoError);
  });

  it("raises MissingColumn for a malformed export", () => {
    const dir = mkdtempSync(join(tmpdir(), "plotkit-bad-"));
    writeFileSync(
      join(dir, "fig_biomass_vs_mu.csv"),
      "mu,bc_type,biomass_u\n0.1,nf,0.5\n",
    );
    expect(() => buildFigure("fig_biomass_vs_mu", dir)).toThrowError(MissingColumn);
  });

  it("renders empty axes plus footer for a header-only export", () => {
    const dir = mkdtempSync(join(tmpdir(), "plotkit-empty-"));
    writeFileSync(
      join(dir, "fig_biomass_vs_mu.csv"),
      "# model.q=0.11\n# grid.n=48\nmu,bc_type,biomass_u,biomass_v,outcome\n",
    );
    const svg = renderFigure(buildFigure("fig_biomass_vs_mu", dir));
    expect(svg).not.toContain("<polyline");
    expect(svg).toContain("model.q=0.11");
    expect(svg.startsWith("<svg ")).toBe(true);
  });
});

describe("full export run", () => {
  it("renders all six figures from a complete export run in under 30s", () => {
    const started = Date.now();
    for (const name of Object.keys(FIGURES)) {
      const svg = renderFigure(buildFigure(name, RUN_DIR));
      expect(svg.length).toBeGreaterThan(2000);
      expect(svg.startsWith("<svg ")).toBe(true);
      expect(svg.endsWith("</svg>\n")).toBe(true);
    }
    expect(Date.now() - started).toBeLessThan(30_000);
  });

  it("reproduces the config echo in the footer", () => {
    const svg = renderFigure(buildFigure("fig_bistable_ff", RUN_DIR));
    expect(svg).toContain("model.q=0.11");
    expect(svg).toContain("model.mu=0.04");
    expect(svg).toContain("grid.n=48");
  });

  it("labels bistable panels with initial conditions and outcomes", () => {
    const svg = renderFigure(buildFigure("fig_bistable_nfnf", RUN_DIR));
    expect(svg.match(/final profile/g)!.length).toBe(3);
    expect(svg).toContain("Extinct");
  });

  it("never modifies its input files", () => {
    const snapshot = () =>
      readdirSync(RUN_DIR)
        .sort()
        .map((f) => `${f}:${sha256(readFileSync(join(RUN_DIR, f), "utf8"))}`)
        .join("\n");
    const before = snapshot();
    for (const name of Object.keys(FIGURES)) {
      renderFigure(buildFigure(name, RUN_DIR));
    }
    expect(snapshot()).toBe(before);
  });
});
