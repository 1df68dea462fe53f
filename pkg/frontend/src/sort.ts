/** Client-side column sorting over ranking rows.
 *
 * Sorting is pure and local: toggling never refetches. Ratio columns compare
 * by exact cross-multiplication of the server's numerator/denominator pairs,
 * not by parsing the rounded display strings. */

import type { RankingRowPayload, RatioCell } from "./types.js";

export const SORTABLE_COLUMNS = [
  "rank",
  "institution",
  "department",
  "trs_total",
  "trs_without_profile",
  "paper_count",
  "papers_per_trs",
  "citation_count",
  "citations_per_trs",
  "citations_per_paper",
] as const;

export type SortKey = (typeof SORTABLE_COLUMNS)[number];

export interface SortState {
  key: SortKey;
  ascending: boolean;
}

const TEXT_COLUMNS: ReadonlySet<SortKey> = new Set(["institution", "department"]);
const RATIO_COLUMNS: ReadonlySet<SortKey> = new Set([
  "papers_per_trs",
  "citations_per_trs",
  "citations_per_paper",
]);

export function compareRatio(a: RatioCell, b: RatioCell): number {
  // den > 0 always; integers at fixture scale stay well inside 2^53.
  return a.num * b.den - b.num * a.den;
}

function columnValue(row: RankingRowPayload, key: SortKey): number | string | RatioCell {
  switch (key) {
    case "rank":
      return row.rank;
    case "institution":
      return row.institution;
    case "department":
      return row.department;
    default:
      return row.metrics[key];
  }
}

export function compareRows(a: RankingRowPayload, b: RankingRowPayload, key: SortKey): number {
  const left = columnValue(a, key);
  const right = columnValue(b, key);
  if (RATIO_COLUMNS.has(key)) {
    return compareRatio(left as RatioCell, right as RatioCell);
  }
  if (TEXT_COLUMNS.has(key)) {
    return (left as string).localeCompare(right as string);
  }
  return (left as number) - (right as number);
}

/** Stable sort; department name breaks ties so reorders are deterministic. */
export function sortRows(
  rows: readonly RankingRowPayload[],
  state: SortState,
): RankingRowPayload[] {
  const sorted = [...rows].sort((a, b) => {
    const primary = compareRows(a, b, state.key);
    if (primary !== 0) {
      return state.ascending ? primary : -primary;
    }
    return a.department.localeCompare(b.department);
  });
  return sorted;
}

/** Clicking the active column flips direction; a new column starts ascending
 * for text, descending for numbers (the order people scan rankings in). */
export function toggleSort(state: SortState | null, key: SortKey): SortState {
  if (state && state.key === key) {
    return { key, ascending: !state.ascending };
  }
  return { key, ascending: TEXT_COLUMNS.has(key) };
}
