/** Response shapes of the comparison API. Ratio cells carry the server's
 * two-decimal display string plus the exact numerator/denominator; cells are
 * rendered verbatim and never re-rounded client-side. */

export interface RatioCell {
  display: string;
  num: number;
  den: number;
}

export interface WindowPayload {
  start_year: number;
  end_year: number;
}

export interface MetricsPayload {
  window: WindowPayload;
  trs_total: number;
  trs_without_profile: number;
  paper_count: number;
  citation_count: number;
  papers_per_trs: RatioCell;
  citations_per_trs: RatioCell;
  citations_per_paper: RatioCell;
}

export interface RankingRowPayload {
  rank: number;
  department_id: string;
  department: string;
  unit_kind: string;
  institution: string;
  metrics: MetricsPayload;
}

export interface RankingTablePayload {
  metric: string;
  direction: "asc" | "desc";
  scope: string;
  scope_params: Record<string, string>;
  rows: RankingRowPayload[];
}

export interface InstitutionPayload {
  id: string;
  name: string;
  abbreviation: string;
  trs_count: number;
}

export interface MetaPayload {
  snapshot_id: string;
  created_at: string;
  window: WindowPayload;
  fetched_at: string | null;
}

export const METRICS = [
  "citations_per_trs",
  "citations_per_paper",
  "papers_per_trs",
  "paper_count",
  "citation_count",
] as const;

export type MetricName = (typeof METRICS)[number];
