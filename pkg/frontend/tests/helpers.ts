import type {
  MetricsPayload,
  RankingRowPayload,
  RankingTablePayload,
  RatioCell,
} from "../src/types.js";

export function ratio(num: number, den: number, display: string): RatioCell {
  return { num, den, display };
}

export interface RowSpec {
  id: string;
  department: string;
  institution?: string;
  rank?: number;
  trs?: number;
  missing?: number;
  papers?: number;
  citations?: number;
}

export function makeRow(spec: RowSpec): RankingRowPayload {
  const trs = spec.trs ?? 2;
  const papers = spec.papers ?? 3;
  const citations = spec.citations ?? 20;
  const show = (num: number, den: number) => (num / den).toFixed(2);
  const metrics: MetricsPayload = {
    window: { start_year: 2017, end_year: 2021 },
    trs_total: trs,
    trs_without_profile: spec.missing ?? 0,
    paper_count: papers,
    citation_count: citations,
    papers_per_trs: ratio(papers, trs, show(papers, trs)),
    citations_per_trs: ratio(citations, trs, show(citations, trs)),
    citations_per_paper: papers
      ? ratio(citations, papers, show(citations, papers))
      : ratio(0, 1, "0.00"),
  };
  return {
    rank: spec.rank ?? 1,
    department_id: spec.id,
    department: spec.department,
    unit_kind: "Department",
    institution: spec.institution ?? "U1",
    metrics,
  };
}

export function makeTable(rows: RankingRowPayload[]): RankingTablePayload {
  return {
    metric: "citations_per_trs",
    direction: "desc",
    scope: "adhoc",
    scope_params: {},
    rows,
  };
}

export function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}
