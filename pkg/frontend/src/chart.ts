/** Hand-rolled SVG bar chart showing both headline metrics side by side.
 *
 * Bars scale per metric against that metric's maximum; value labels reuse the
 * API display strings verbatim. Pure string output, no DOM dependency. */

import { escapeHtml } from "./table.js";
import type { RankingRowPayload } from "./types.js";

const BAR_HEIGHT = 14;
const BAR_GAP = 4;
const GROUP_GAP = 16;
const LABEL_WIDTH = 220;
const VALUE_WIDTH = 70;

const SERIES = [
  { key: "citations_per_trs", color: "#2563eb" },
  { key: "citations_per_paper", color: "#f59e0b" },
] as const;

export function barChart(rows: readonly RankingRowPayload[], width = 640): string {
  if (rows.length === 0) return "";
  const plotWidth = Math.max(width - LABEL_WIDTH - VALUE_WIDTH, 80);
  const maxima = SERIES.map((series) =>
    Math.max(
      ...rows.map((row) => {
        const cell = row.metrics[series.key];
        return cell.num / cell.den;
      }),
      0,
    ),
  );
  const groupHeight = SERIES.length * BAR_HEIGHT + (SERIES.length - 1) * BAR_GAP;
  const height = rows.length * (groupHeight + GROUP_GAP);
  const parts: string[] = [];
  rows.forEach((row, index) => {
    const top = index * (groupHeight + GROUP_GAP);
    const label = `${row.institution} · ${row.department}`;
    parts.push(
      `<text x="${LABEL_WIDTH - 8}" y="${top + groupHeight / 2 + 4}" ` +
        `text-anchor="end" class="chart-label">${escapeHtml(label)}</text>`,
    );
    SERIES.forEach((series, s) => {
      const cell = row.metrics[series.key];
      const max = maxima[s] ?? 0;
      const value = cell.num / cell.den;
      const barWidth = max > 0 ? Math.max((value / max) * plotWidth, value > 0 ? 2 : 0) : 0;
      const y = top + s * (BAR_HEIGHT + BAR_GAP);
      parts.push(
        `<rect x="${LABEL_WIDTH}" y="${y}" width="${barWidth.toFixed(1)}" ` +
          `height="${BAR_HEIGHT}" fill="${series.color}" rx="2"></rect>`,
      );
      parts.push(
        `<text x="${LABEL_WIDTH + barWidth + 6}" y="${y + BAR_HEIGHT - 3}" ` +
          `class="chart-value">${escapeHtml(cell.display)}</text>`,
      );
    });
  });
  return (
    `<svg viewBox="0 0 ${width} ${height}" width="100%" height="${height}" ` +
    `role="img" xmlns="http://www.w3.org/2000/svg">${parts.join("")}</svg>`
  );
}

export function chartLegend(labels: readonly [string, string]): string {
  return (
    `<span class="legend"><i style="background:${SERIES[0].color}"></i>${escapeHtml(labels[0])}</span>` +
    `<span class="legend"><i style="background:${SERIES[1].color}"></i>${escapeHtml(labels[1])}</span>`
  );
}
