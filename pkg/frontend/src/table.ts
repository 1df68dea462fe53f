/** Ranking table rendering to HTML strings.
 *
 * Numeric cells show the API payload values verbatim (counts as integers,
 * ratios as the server's two-decimal display strings). */

import type { SortKey, SortState } from "./sort.js";
import type { Translator } from "./i18n.js";
import type { RankingRowPayload } from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

export interface TableOptions {
  sort: SortState | null;
  t: Translator;
  /** Render a leading checkbox/toggle column via this hook. */
  selectable?: (row: RankingRowPayload) => string;
}

const COLUMNS: readonly { key: SortKey; label: string; numeric: boolean }[] = [
  { key: "rank", label: "col.rank", numeric: true },
  { key: "institution", label: "col.institution", numeric: false },
  { key: "department", label: "col.department", numeric: false },
  { key: "trs_total", label: "col.trs_total", numeric: true },
  { key: "trs_without_profile", label: "col.trs_without_profile", numeric: true },
  { key: "paper_count", label: "col.paper_count", numeric: true },
  { key: "papers_per_trs", label: "col.papers_per_trs", numeric: true },
  { key: "citation_count", label: "col.citation_count", numeric: true },
  { key: "citations_per_trs", label: "col.citations_per_trs", numeric: true },
  { key: "citations_per_paper", label: "col.citations_per_paper", numeric: true },
];

function cellText(row: RankingRowPayload, key: SortKey): string {
  switch (key) {
    case "rank":
      return String(row.rank);
    case "institution":
      return row.institution;
    case "department":
      return row.department;
    case "papers_per_trs":
    case "citations_per_trs":
    case "citations_per_paper":
      return row.metrics[key].display;
    default:
      return String(row.metrics[key]);
  }
}

export function renderTable(rows: readonly RankingRowPayload[], options: TableOptions): string {
  const { sort, t, selectable } = options;
  const heads: string[] = [];
  if (selectable) {
    heads.push(`<th class="select-col">${escapeHtml(t("col.select"))}</th>`);
  }
  for (const column of COLUMNS) {
    const active = sort && sort.key === column.key;
    const arrow = active ? (sort.ascending ? " ↑" : " ↓") : "";
    heads.push(
      `<th data-sort="${column.key}" class="sortable${active ? " active" : ""}">` +
        `${escapeHtml(t(column.label))}${arrow}</th>`,
    );
  }
  const body = rows
    .map((row) => {
      const cells: string[] = [];
      if (selectable) {
        cells.push(`<td class="select-col">${selectable(row)}</td>`);
      }
      for (const column of COLUMNS) {
        const text = escapeHtml(cellText(row, column.key));
        cells.push(`<td class="${column.numeric ? "num" : "text"}">${text}</td>`);
      }
      return `<tr data-department="${escapeHtml(row.department_id)}">${cells.join("")}</tr>`;
    })
    .join("");
  return (
    `<table class="ranking"><thead><tr>${heads.join("")}</tr></thead>` +
    `<tbody>${body}</tbody></table>`
  );
}
