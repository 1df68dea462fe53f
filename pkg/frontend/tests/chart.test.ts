import { describe, expect, it } from "vitest";

import { barChart } from "../src/chart.js";
import { makeRow } from "./helpers.js";

describe("bar chart", () => {
  const rows = [
    makeRow({ id: "a", department: "Alpha", trs: 2, citations: 20, papers: 3 }),
    makeRow({ id: "b", department: "Beta", trs: 4, citations: 8, papers: 2 }),
  ];

  it("draws two bars per department", () => {
    const svg = barChart(rows);
    expect(svg.match(/<rect /g)).toHaveLength(4);
  });

  it("labels bars with the API display strings verbatim", () => {
    const svg = barChart(rows);
    expect(svg).toContain("10.00"); // 20 citations / 2 TRS
    expect(svg).toContain("6.67"); // 20 citations / 3 papers
    expect(svg).toContain("2.00"); // 8 citations / 4 TRS
  });

  it("handles zero metrics and empty input", () => {
    expect(barChart([])).toBe("");
    const zeros = [makeRow({ id: "z", department: "Zero", citations: 0, papers: 0 })];
    const svg = barChart(zeros);
    expect(svg).toContain("<svg");
    expect(svg).toContain('width="0.0"');
  });

  it("escapes department names", () => {
    const tricky = [makeRow({ id: "x", department: 'A<b>&"c' })];
    expect(barChart(tricky)).toContain("A&lt;b&gt;&amp;&quot;c");
  });
});
