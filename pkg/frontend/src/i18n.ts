/** Message catalog with language fallback. English ships complete; other
 * catalogs may be partial (or empty scaffolds) and fall back key by key. */

export const LANGUAGES = ["en", "el"] as const;

type Catalog = Record<string, string>;

const EN: Catalog = {
  "app.title": "Department research-impact explorer",
  "tab.institution": "By institution",
  "tab.thematic": "Thematic search",
  "tab.compare": "Compare departments",
  "controls.metric": "Metric",
  "controls.direction": "Order",
  "controls.direction.desc": "Decreasing",
  "controls.direction.asc": "Increasing",
  "controls.language": "Language",
  "institution.pick": "Institution",
  "thematic.placeholder": "Type search terms, e.g. physics",
  "thematic.search": "Search",
  "thematic.excluded": "Excluded departments",
  "thematic.exclude": "Exclude",
  "thematic.include": "Include",
  "compare.hint": "Pick two to five departments from any institution.",
  "compare.cap": "Comparison is limited to five departments.",
  "compare.need_two": "Pick at least two departments to compare.",
  "compare.run": "Compare",
  "compare.clear": "Clear selection",
  "col.rank": "Rank",
  "col.institution": "Institution",
  "col.department": "Department",
  "col.unit_kind": "Unit",
  "col.trs_total": "TRS members",
  "col.trs_without_profile": "Without profile",
  "col.paper_count": "Papers",
  "col.papers_per_trs": "Papers/TRS",
  "col.citation_count": "Citations",
  "col.citations_per_trs": "Citations/TRS",
  "col.citations_per_paper": "Citations/paper",
  "col.select": "Select",
  "metric.citations_per_trs": "Citations per TRS member",
  "metric.citations_per_paper": "Citations per paper",
  "metric.papers_per_trs": "Papers per TRS member",
  "metric.paper_count": "Paper count",
  "metric.citation_count": "Citation count",
  "chart.title": "Headline metrics",
  "error.api": "The data service reported an error: {detail}",
  "error.network": "Could not reach the data service.",
  "empty.results": "No departments matched.",
  "meta.window": "Publication window {start}–{end}",
  "meta.snapshot": "snapshot {id}",
};

// Greek catalog: mechanism shipped, translations intentionally not bundled.
const EL: Catalog = {};

const CATALOGS: Record<string, Catalog> = { en: EN, el: EL };

export type Translator = (key: string, vars?: Record<string, string | number>) => string;

export function translator(lang: string): Translator {
  const catalog = CATALOGS[lang] ?? {};
  return (key, vars) => {
    let text = catalog[key] ?? EN[key] ?? key;
    if (vars) {
      for (const [name, value] of Object.entries(vars)) {
        text = text.replaceAll(`{${name}}`, String(value));
      }
    }
    return text;
  };
}
